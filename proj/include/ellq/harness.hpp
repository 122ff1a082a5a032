#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "ellq/params.hpp"

namespace ellq::harness {

using json = nlohmann::json;

struct precision_mode {
    bool extended = false;
    int digits = 15;  // echoed; extended arithmetic is long double, capped at 18
};

struct run_config {
    cplx q{0.35, 0.05};
    cplx r{2.3, 0.15};
    cplx c{1.0, 0.0};
    int trunc = 40;
    std::optional<double> tol;  // unset: each check uses its own default
    int samples = 0;            // 0: per-check default counts
    std::uint64_t seed = 12345;
    std::vector<std::string> suites{"all"};
    precision_mode precision;

    elliptic_params params() const { return elliptic_params(q, r, c); }
    truncation_policy policy() const;
};

// throws invalid_params on |p|, |p*| >= 1, unknown suites, bad numbers
void validate(const run_config& cfg);
run_config config_from_json(const json& j);
json config_to_json(const run_config& cfg);
run_config load_config(const std::string& path);

precision_mode parse_precision(const std::string& s);
// "a", "a,b", "a+bi", "a-bi"
cplx parse_complex(const std::string& s);

const std::vector<std::string>& suite_names();
std::vector<std::string> expand_suites(const std::vector<std::string>& s);

// keyed generator: independent stream per (seed, suite, check index)
class keyed_rng {
public:
    keyed_rng(std::uint64_t seed, const std::string& suite, std::size_t index);
    double uniform(double lo, double hi);
    // Re in [re_lo, re_hi], Im in [0.05, 0.3]
    cplx point(double re_lo = -1.0, double re_hi = 1.0);

private:
    std::mt19937_64 gen_;
};

struct check_result {
    std::string suite;
    std::string check_name;
    std::string paper_anchor;
    json parameters;
    double residual = 0;
    double tol = 0;
    bool pass = false;
};

struct report {
    json config;
    std::vector<check_result> checks;
};

int max_threads();

// run fn(i) for i < n on up to `threads` workers
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

report run_verify(const run_config& cfg, int threads);
json report_json(const report& r, std::optional<double> wall_seconds = std::nullopt);
int exit_code(const report& r);
std::size_t failed_count(const report& r);

struct trunc_row {
    int order;
    double residual;
};
// theta quasi-periodicity [u + r] = -[u] at fixed points vs truncation order
std::vector<trunc_row> theta_truncation_table(const run_config& cfg, const std::vector<int>& orders);
// non-increasing down to the rounding floor
bool monotone(const std::vector<trunc_row>& t, double floor = 1e-13);

struct grid {
    std::vector<cplx> q, r, c;
};
json run_sweep(const run_config& cfg, const grid& g, int threads);

}  // namespace ellq::harness
