#include "ellq/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <regex>
#include <thread>

#include "ellq/algebroid.hpp"
#include "ellq/evalrep.hpp"
#include "ellq/freefield.hpp"
#include "ellq/qseries.hpp"
#include "ellq/rmatrix.hpp"

namespace ellq::harness {

namespace {

json cj(cplx z) { return json::array({z.real(), z.imag()}); }

cplx jc(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
    if (j.is_string()) return parse_complex(j.get<std::string>());
    throw invalid_params("complex value must be [re, im]");
}

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

truncation_policy run_config::policy() const {
    truncation_policy p;
    p.order = trunc;
    return p;
}

// ---- config

precision_mode parse_precision(const std::string& s) {
    precision_mode m;
    if (s == "double") return m;
    static const std::regex ext(R"(extended(?:[:(](\d+)\)?)?)");
    std::smatch mt;
    if (!std::regex_match(s, mt, ext)) throw invalid_params("precision must be double or extended[:digits]");
    m.extended = true;
    m.digits = mt[1].matched ? std::stoi(mt[1].str()) : 18;
    if (m.digits < 1) throw invalid_params("precision digits must be positive");
    return m;
}

cplx parse_complex(const std::string& s) {
    static const std::regex pair(R"(\s*([-+0-9.eE]+)\s*,\s*([-+0-9.eE]+)\s*)");
    static const std::regex alg(R"(\s*([-+]?[0-9.]+(?:[eE][-+]?\d+)?)?\s*(?:([-+]\s*[0-9.]*(?:[eE][-+]?\d+)?)\s*[ij])?\s*)");
    std::smatch m;
    try {
        if (std::regex_match(s, m, pair)) return {std::stod(m[1].str()), std::stod(m[2].str())};
        static const std::regex pure_im(R"(\s*([-+]?[0-9.]*(?:[eE][-+]?\d+)?)\s*[ij]\s*)");
        if (std::regex_match(s, m, pure_im)) {
            std::string t = m[1].str();
            if (t.empty() || t == "+" || t == "-") t += "1";
            return {0.0, std::stod(t)};
        }
        if (std::regex_match(s, m, alg) && (m[1].matched || m[2].matched)) {
            const double re = m[1].matched ? std::stod(m[1].str()) : 0.0;
            double im = 0;
            if (m[2].matched) {
                std::string t = m[2].str();
                t.erase(std::remove(t.begin(), t.end(), ' '), t.end());
                if (t == "+" || t == "-") t += "1";
                im = std::stod(t);
            }
            return {re, im};
        }
    } catch (const std::logic_error&) {
    }
    throw invalid_params("cannot parse complex number: " + s);
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> n{"theta", "rmatrix", "rll", "algebroid", "freefield"};
    return n;
}

std::vector<std::string> expand_suites(const std::vector<std::string>& s) {
    std::vector<std::string> out;
    for (const auto& x : s) {
        if (x == "all") {
            out = suite_names();
            return out;
        }
        if (std::find(suite_names().begin(), suite_names().end(), x) == suite_names().end())
            throw invalid_params("unknown suite: " + x);
        if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
    }
    // canonical order
    std::vector<std::string> sorted;
    for (const auto& n : suite_names())
        if (std::find(out.begin(), out.end(), n) != out.end()) sorted.push_back(n);
    return sorted;
}

void validate(const run_config& cfg) {
    (void)cfg.params();  // |q|, |p|, |p*|
    if (cfg.trunc < 1 || cfg.trunc > 400) throw invalid_params("trunc must be in [1, 400]");
    if (cfg.samples < 0) throw invalid_params("samples must be >= 0");
    if (cfg.tol && !(*cfg.tol >= 0)) throw invalid_params("tol must be >= 0");
    if (cfg.suites.empty()) throw invalid_params("no suites selected");
    (void)expand_suites(cfg.suites);
}

run_config config_from_json(const json& j) {
    run_config c;
    if (!j.is_object()) throw invalid_params("config must be an object");
    for (const auto& [k, v] : j.items()) {
        if (k == "q") c.q = jc(v);
        else if (k == "r") c.r = jc(v);
        else if (k == "c") c.c = jc(v);
        else if (k == "trunc") c.trunc = v.get<int>();
        else if (k == "tol") {
            if (!v.is_null()) c.tol = v.get<double>();
        } else if (k == "samples") c.samples = v.get<int>();
        else if (k == "seed") c.seed = v.get<std::uint64_t>();
        else if (k == "suites") {
            c.suites = v.is_string() ? std::vector<std::string>{v.get<std::string>()} : v.get<std::vector<std::string>>();
        } else if (k == "precision") {
            if (v.is_string()) c.precision = parse_precision(v.get<std::string>());
            else if (v.is_object()) {
                c.precision = parse_precision(v.value("mode", std::string("double")));
                if (c.precision.extended && v.contains("digits")) c.precision.digits = v["digits"].get<int>();
            } else
                throw invalid_params("precision must be a string or {mode, digits}");
        } else
            throw invalid_params("unknown config field: " + k);
    }
    validate(c);
    return c;
}

json config_to_json(const run_config& c) {
    json j;
    j["q"] = cj(c.q);
    j["r"] = cj(c.r);
    j["c"] = cj(c.c);
    j["trunc"] = c.trunc;
    j["tol"] = c.tol ? json(*c.tol) : json(nullptr);
    j["samples"] = c.samples;
    j["seed"] = c.seed;
    j["suites"] = c.suites;
    if (c.precision.extended)
        j["precision"] = {{"mode", "extended"}, {"digits", c.precision.digits}};
    else
        j["precision"] = {{"mode", "double"}};
    return j;
}

run_config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_params("cannot open config: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw invalid_params(std::string("config parse error: ") + e.what());
    }
    return config_from_json(j);
}

// ---- rng

keyed_rng::keyed_rng(std::uint64_t seed, const std::string& suite, std::size_t index)
    : gen_(splitmix(splitmix(seed) ^ fnv1a(suite) ^ splitmix(index + 0x51ed27ULL))) {}

double keyed_rng::uniform(double lo, double hi) {
    // fixed 53-bit mapping; std distributions differ between standard libraries
    const double x = double(gen_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * x;
}

cplx keyed_rng::point(double re_lo, double re_hi) {
    const double re = uniform(re_lo, re_hi);
    return {re, uniform(0.05, 0.3)};
}

// ---- threads

int max_threads() {
    int n = int(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* e = std::getenv("ELLQ_MAX_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(e, &end, 10);
        if (end != e && v >= 1) n = std::min<long>(n, v);
    }
    return n;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    threads = std::max(1, std::min<int>(threads, int(n)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) fn(i);
        });
}

// ---- checks

namespace {

constexpr int max_resamples = 5;

struct context {
    run_config cfg;
    elliptic_params prm;        // configured level
    elliptic_params prm0;       // level zero, evaluation modules
    truncation_policy pol;
    int samples = 0;
};

struct outcome {
    double residual = 0;
    json parameters = json::object();
};

using check_fn = std::function<outcome(keyed_rng&, const context&, int n)>;

struct check_def {
    std::string name;
    std::string anchor;
    double tol;
    int samples;  // 0: deterministic, not sampled
    check_fn fn;
};

// Evaluate at n random points, resampling a point that lands too close to a pole.
// draw() returns the residual and the point description.
outcome sampled(keyed_rng& rng, int n, const std::function<std::pair<double, json>(keyed_rng&)>& draw) {
    outcome o;
    o.residual = 0;
    int resampled = 0;
    json worst;
    for (int i = 0; i < n; ++i) {
        bool ok = false;
        for (int attempt = 0; attempt <= max_resamples && !ok; ++attempt) {
            try {
                auto [res, where] = draw(rng);
                if (std::isnan(res)) res = std::numeric_limits<double>::infinity();
                if (res > o.residual || worst.is_null()) {
                    o.residual = std::max(o.residual, res);
                    worst = where;
                }
                ok = true;
            } catch (const pole_proximity&) {
                ++resampled;
            } catch (const annulus_violation&) {
                ++resampled;
            }
        }
        if (!ok) {
            o.residual = std::numeric_limits<double>::infinity();
            o.parameters["error"] = "pole proximity after " + std::to_string(max_resamples) + " resamples";
            break;
        }
    }
    o.parameters["samples"] = n;
    o.parameters["resampled"] = resampled;
    o.parameters["worst_point"] = worst;
    return o;
}

template <class T>
std::complex<T> widen(cplx z) {
    return {T(z.real()), T(z.imag())};
}

// theta identities in the configured precision
template <class T>
std::vector<check_def> theta_checks_t() {
    auto P = [](const context& c) { return c.prm.template convert<T>(); };
    std::vector<check_def> v;
    v.push_back({"quasi_period_r", "bracket:u+r", 1e-9, 50, [P](keyed_rng& g, const context& c, int n) {
                     const auto prm = P(c);
                     return sampled(g, n, [&](keyed_rng& g) {
                         const cplx u = g.point(-1.5, 1.5);
                         return std::pair{double(qseries::quasi_period_r_residual_t(widen<T>(u), prm, c.pol.order)),
                                          json{{"u", cj(u)}}};
                     });
                 }});
    v.push_back({"quasi_period_tau", "bracket:u+r*tau", 1e-9, 50, [P](keyed_rng& g, const context& c, int n) {
                     const auto prm = P(c);
                     return sampled(g, n, [&](keyed_rng& g) {
                         const cplx u = g.point(-1.5, 1.5);
                         return std::pair{
                             double(qseries::quasi_period_tau_residual_t(widen<T>(u), prm, c.pol.order, false)),
                             json{{"u", cj(u)}}};
                     });
                 }});
    v.push_back({"quasi_period_tau_sign_corrected", "bracket:u+r*tau (sign corrected)", 1e-9, 50,
                 [P](keyed_rng& g, const context& c, int n) {
                     const auto prm = P(c);
                     return sampled(g, n, [&](keyed_rng& g) {
                         const cplx u = g.point(-1.5, 1.5);
                         return std::pair{
                             double(qseries::quasi_period_tau_residual_t(widen<T>(u), prm, c.pol.order, true)),
                             json{{"u", cj(u)}}};
                     });
                 }});
    v.push_back({"triple_product_vs_product", "theta:triple-product", 1e-10, 50,
                 [P](keyed_rng& g, const context& c, int n) {
                     const auto prm = P(c);
                     return sampled(g, n, [&](keyed_rng& g) {
                         const cplx u = g.point(-1.5, 1.5);
                         const auto z = prm.qpow(T(2) * widen<T>(u));
                         return std::pair{double(qseries::triple_product_residual_t(z, prm, c.pol.order, 60)),
                                          json{{"u", cj(u)}}};
                     });
                 }});
    v.push_back({"oddness", "bracket:[-u]=-[u]", 1e-9, 50, [P](keyed_rng& g, const context& c, int n) {
                     const auto prm = P(c);
                     return sampled(g, n, [&](keyed_rng& g) {
                         const cplx u = g.point(-1.5, 1.5);
                         return std::pair{double(qseries::oddness_residual_t(widen<T>(u), prm, c.pol.order)),
                                          json{{"u", cj(u)}}};
                     });
                 }});
    v.push_back({"bracket_truncation_error", "bracket:product-truncation", 1e-9, 50,
                 [P](keyed_rng& g, const context& c, int n) {
                     const auto prm = P(c);
                     return sampled(g, n, [&](keyed_rng& g) {
                         const cplx u = g.point(-1.5, 1.5);
                         const auto a = qseries::bracket(widen<T>(u), prm, c.pol.order);
                         const auto b = qseries::bracket(widen<T>(u), prm, c.pol.order + 10);
                         return std::pair{double(qseries::rel_residual(a, b)), json{{"u", cj(u)}}};
                     });
                 }});
    return v;
}

std::vector<check_def> theta_checks(const context& c) {
    if (c.cfg.precision.extended) return theta_checks_t<long double>();
    return theta_checks_t<double>();
}

std::vector<check_def> rmatrix_checks() {
    std::vector<check_def> v;
    v.push_back({"ice_rule", "R:ice-rule", 0.0, 25, [](keyed_rng& g, const context& c, int n) {
                     return sampled(g, n, [&](keyed_rng& g) {
                         const cplx u = g.point(), s = g.point(-2, 2);
                         double res = 0;
                         for (bool st : {false, true})
                             res = std::max(res, rmatrix::ice_violation(rmatrix::r_matrix(u, s, c.prm, st, c.pol)));
                         return std::pair{res, json{{"u", cj(u)}, {"s", cj(s)}}};
                     });
                 }});
    for (bool st : {false, true}) {
        v.push_back({st ? "dybe_starred" : "dybe", "R:dynamical-YBE", 1e-9, 25,
                     [st](keyed_rng& g, const context& c, int n) {
                         return sampled(g, n, [&](keyed_rng& g) {
                             const cplx u1 = g.point(), u2 = g.point(), u3 = g.point(), s = g.point(-2, 2);
                             return std::pair{rmatrix::dybe_residual(u1, u2, u3, s, c.prm, st, c.pol),
                                              json{{"u1", cj(u1)}, {"u2", cj(u2)}, {"u3", cj(u3)}, {"s", cj(s)}}};
                         });
                     }});
    }
    v.push_back({"u0_degeneration", "R:u=0", 1e-10, 25, [](keyed_rng& g, const context& c, int n) {
                     return sampled(g, n, [&](keyed_rng& g) {
                         const cplx s = g.point(-2, 2);
                         double res = 0;
                         for (bool st : {false, true}) {
                             const auto w = rmatrix::boltzmann(0.0, s, c.prm, st, c.pol);
                             res = std::max({res, std::abs(w.b), std::abs(w.bbar), std::abs(w.c - 1.0),
                                             std::abs(w.cbar - 1.0)});
                         }
                         return std::pair{res, json{{"s", cj(s)}}};
                     });
                 }});
    v.push_back({"kappa_level_zero", "kappa:c=0", 0.0, 0, [](keyed_rng&, const context& c, int) {
                     const elliptic_params p0(c.cfg.q, c.cfg.r, 0.0);
                     outcome o;
                     o.residual = std::abs(rmatrix::kappa(p0, c.pol) - 1.0);
                     return o;
                 }});
    v.push_back({"kappa_cancel_vs_extrapolated", "kappa:analytic-cancellation", 1e-7, 0,
                 [](keyed_rng&, const context& c, int) {
                     outcome o;
                     std::vector<cplx> levels{1.0, 2.0};
                     if (c.cfg.c != cplx(0) && c.cfg.c != cplx(1) && c.cfg.c != cplx(2)) levels.push_back(c.cfg.c);
                     json per = json::array();
                     for (cplx k : levels) {
                         const elliptic_params p(c.cfg.q, c.cfg.r, k);
                         const cplx a = rmatrix::kappa(p, c.pol), b = rmatrix::kappa_extrapolated(p, c.pol);
                         const double d = std::abs(a - b) / std::abs(a);
                         o.residual = std::max(o.residual, d);
                         per.push_back({{"c", cj(k)}, {"kappa", cj(a)}, {"extrapolated", cj(b)}});
                     }
                     o.parameters["levels"] = per;
                     return o;
                 }});
    v.push_back({"fused_ice_rule", "R:fusion", 0.0, 10, [](keyed_rng& g, const context& c, int n) {
                     return sampled(g, n, [&](keyed_rng& g) {
                         const cplx u = g.point(), s = g.point(-2, 2);
                         double res = 0;
                         for (int l : {2, 3})
                             res = std::max(res, rmatrix::ice_violation(rmatrix::fuse_r(l, u, s, c.prm0, c.pol)));
                         return std::pair{res, json{{"u", cj(u)}, {"s", cj(s)}}};
                     });
                 }});
    for (int l : {2, 3}) {
        v.push_back({"mixed_dybe_l" + std::to_string(l), "R:fused-YBE", 1e-9, l == 2 ? 10 : 3,
                     [l](keyed_rng& g, const context& c, int n) {
                         return sampled(g, n, [&](keyed_rng& g) {
                             const cplx u1 = g.point(), u2 = g.point(), u3 = g.point(), s = g.point(-2, 2);
                             auto o = json{{"u1", cj(u1)}, {"u2", cj(u2)}, {"u3", cj(u3)}, {"s", cj(s)}, {"l", l}};
                             return std::pair{rmatrix::mixed_dybe_residual(l, u1, u2, u3, s, c.prm0, c.pol), o};
                         });
                     }});
    }
    return v;
}

std::vector<check_def> rll_checks() {
    using evalrep::eval_rep;
    std::vector<check_def> v;
    for (int l : {1, 2}) {
        v.push_back({"closed_vs_gauss_l" + std::to_string(l), "L:closed-form-vs-Gauss", 1e-9, 25,
                     [l](keyed_rng& g, const context& c, int n) {
                         return sampled(g, n, [&](keyed_rng& g) {
                             const eval_rep rep{l, g.point()};
                             const cplx u = g.point(), P = g.point(-2, 2);
                             return std::pair{evalrep::closed_vs_gauss(u, rep, P, c.prm0, c.pol),
                                              json{{"u", cj(u)}, {"v", cj(rep.v)}, {"P", cj(P)}}};
                         });
                     }});
    }
    for (int l : {1, 2, 3}) {
        v.push_back({"l_vs_fused_l" + std::to_string(l), "L:L-equals-fused-R", 1e-8, 25,
                     [l](keyed_rng& g, const context& c, int n) {
                         return sampled(g, n, [&](keyed_rng& g) {
                             const eval_rep rep{l, g.point()};
                             const cplx u = g.point(), P = g.point(-2, 2);
                             return std::pair{evalrep::l_vs_fused(u, rep, P, c.prm0, c.pol),
                                              json{{"u", cj(u)}, {"v", cj(rep.v)}, {"P", cj(P)}}};
                         });
                     }});
    }
    for (int l1 : {1, 2})
        for (int l2 : {1, 2}) {
            v.push_back({"rll_l" + std::to_string(l1) + "_l" + std::to_string(l2), "L:RLL", 1e-8, 25,
                         [l1, l2](keyed_rng& g, const context& c, int n) {
                             return sampled(g, n, [&](keyed_rng& g) {
                                 const eval_rep a{l1, g.point()}, b{l2, g.point()};
                                 const cplx u1 = g.point(), u2 = g.point(), P = g.point(-2, 2);
                                 return std::pair{evalrep::rll_residual(u1, u2, a, b, P, c.prm0, c.pol),
                                                  json{{"u1", cj(u1)}, {"u2", cj(u2)}, {"v1", cj(a.v)},
                                                       {"v2", cj(b.v)}, {"P", cj(P)}}};
                             });
                         }});
        }
    for (int l : {1, 2, 3}) {
        v.push_back({"rll_single_l" + std::to_string(l), "L:RLL", 1e-8, 25, [l](keyed_rng& g, const context& c, int n) {
                         return sampled(g, n, [&](keyed_rng& g) {
                             const eval_rep rep{l, g.point()};
                             const cplx u1 = g.point(), u2 = g.point(), P = g.point(-2, 2);
                             return std::pair{evalrep::rll_residual(u1, u2, rep, P, c.prm0, c.pol),
                                              json{{"u1", cj(u1)}, {"u2", cj(u2)}, {"v", cj(rep.v)}, {"P", cj(P)}}};
                         });
                     }});
    }
    for (int l : {1, 2}) {
        v.push_back({"bigrading_l" + std::to_string(l), "L:bigrading", 1e-9, 25,
                     [l](keyed_rng& g, const context& c, int n) {
                         return sampled(g, n, [&](keyed_rng& g) {
                             const eval_rep rep{l, g.point()};
                             const cplx u = g.point(), P = g.point(-2, 2);
                             return std::pair{evalrep::bigrading_residual(u, rep, P, c.prm0, c.pol),
                                              json{{"u", cj(u)}, {"v", cj(rep.v)}, {"P", cj(P)}}};
                         });
                     }});
    }
    return v;
}

std::vector<check_def> algebroid_checks() {
    using evalrep::eval_rep;
    std::vector<check_def> v;
    v.push_back({"coassociativity", "Hopf:coassociativity", 1e-8, 25, [](keyed_rng& g, const context& c, int n) {
                     return sampled(g, n, [&](keyed_rng& g) {
                         const eval_rep a{1, g.point()}, b{2, g.point()}, d{1, g.point()};
                         const cplx u = g.point(), P = g.point(-2, 2);
                         return std::pair{algebroid::coassociativity(u, a, b, d, P, c.prm0, c.pol),
                                          json{{"u", cj(u)}, {"P", cj(P)}}};
                     });
                 }});
    v.push_back({"counit", "Hopf:counit", 1e-8, 25, [](keyed_rng& g, const context& c, int n) {
                     return sampled(g, n, [&](keyed_rng& g) {
                         const eval_rep rep{2, g.point()};
                         const cplx u = g.point(), P = g.point(-2, 2);
                         double res = 0;
                         for (int e1 : {1, -1})
                             for (int e2 : {1, -1})
                                 res = std::max(res, algebroid::counit_check(e1, e2, u, rep, P, c.prm0, c.pol));
                         return std::pair{res, json{{"u", cj(u)}, {"v", cj(rep.v)}, {"P", cj(P)}}};
                     });
                 }});
    for (int side : {0, 1}) {
        v.push_back({side == 0 ? "antipode_left" : "antipode_right", "Hopf:antipode", 1e-8, 25,
                     [side](keyed_rng& g, const context& c, int n) {
                         return sampled(g, n, [&](keyed_rng& g) {
                             const cplx u = g.point(), P = g.point(-2, 2);
                             double res = 0;
                             for (int l : {1, 2}) {
                                 const auto a = algebroid::antipode_check(u, eval_rep{l, g.point()}, P, c.prm0, c.pol);
                                 res = std::max(res, side == 0 ? a.left : a.right);
                             }
                             return std::pair{res, json{{"u", cj(u)}, {"P", cj(P)}}};
                         });
                     }});
    }
    v.push_back({"coproduct_preserves_rll", "Hopf:coproduct-RLL", 1e-8, 25, [](keyed_rng& g, const context& c, int n) {
                     return sampled(g, n, [&](keyed_rng& g) {
                         const eval_rep a{1, g.point()}, b{2, g.point()};
                         const cplx u1 = g.point(), u2 = g.point(), P = g.point(-2, 2);
                         return std::pair{algebroid::coproduct_rll_residual(u1, u2, a, b, P, c.prm0, c.pol),
                                          json{{"u1", cj(u1)}, {"u2", cj(u2)}, {"P", cj(P)}}};
                     });
                 }});
    v.push_back({"antipode_preserves_rll", "Hopf:antipode-RLL", 1e-8, 25, [](keyed_rng& g, const context& c, int n) {
                     return sampled(g, n, [&](keyed_rng& g) {
                         const cplx u1 = g.point(), u2 = g.point(), P = g.point(-2, 2);
                         double res = 0;
                         for (int l : {1, 2})
                             res = std::max(res, algebroid::antipode_rll_residual(u1, u2, eval_rep{l, g.point()}, P,
                                                                                  c.prm0, c.pol));
                         return std::pair{res, json{{"u1", cj(u1)}, {"u2", cj(u2)}, {"P", cj(P)}}};
                     });
                 }});
    for (int nrep : {1, 2}) {
        v.push_back({"intertwiner_consistency_n" + std::to_string(nrep), "VO:intertwiner-consistency", 1e-9, 10,
                     [nrep](keyed_rng& g, const context& c, int n) {
                         return sampled(g, n, [&](keyed_rng& g) {
                             const cplx v1 = g.point(), v2 = g.point(), u = g.point(), s = g.point(-2, 2);
                             const auto r = algebroid::intertwiner_consistency(nrep, v1, v2, u, s, c.prm0, c.pol);
                             return std::pair{std::max(r.type1, r.type2),
                                              json{{"v1", cj(v1)}, {"v2", cj(v2)}, {"u", cj(u)}, {"s", cj(s)},
                                                   {"type1", r.type1}, {"type2", r.type2}}};
                         });
                     }});
    }
    return v;
}

std::vector<check_def> freefield_checks() {
    namespace ff = freefield;
    std::vector<check_def> v;
    auto level = [](const context& c, double k) { return elliptic_params(c.cfg.q, c.cfg.r, k); };
    v.push_back({"alpha_commutator", "boson:alpha-commutator", 1e-12, 0, [level](keyed_rng&, const context& c, int) {
                     outcome o;
                     for (double k : {1.0, 2.0}) {
                         const auto prm = level(c, k);
                         for (int m = 1; m <= c.pol.order; ++m) {
                             const cplx a = ff::alpha_commutator(m, -m, prm), b = ff::alpha_commutator_via_a(m, -m, prm);
                             o.residual = std::max(o.residual, std::abs(a - b) / std::abs(a));
                         }
                     }
                     o.parameters["levels"] = {1, 2};
                     o.parameters["modes"] = c.pol.order;
                     return o;
                 }});
    struct ex {
        ff::pair_kind kind;
        const char* name;
        std::vector<double> levels;
    };
    const std::vector<ex> pairs{{ff::pair_kind::EE, "exchange_EE", {1}},
                                {ff::pair_kind::FF, "exchange_FF", {1}},
                                {ff::pair_kind::KK, "exchange_KK", {1, 2}},
                                {ff::pair_kind::KE, "exchange_KE", {1}},
                                {ff::pair_kind::KF, "exchange_KF", {1}},
                                {ff::pair_kind::HpHm, "exchange_H_plus_minus", {1, 2}},
                                {ff::pair_kind::HH_same, "exchange_H_same", {1, 2}}};
    for (const auto& p : pairs) {
        v.push_back({p.name, "currents:exchange", 1e-8, 10, [p, level](keyed_rng& g, const context& c, int n) {
                         return sampled(g, n, [&](keyed_rng& g) {
                             const cplx u = g.point(), w = g.point();
                             double res = 0;
                             for (double k : p.levels)
                                 res = std::max(res, ff::exchange_ratio_check(p.kind, u, w, level(c, k), c.pol).deviation);
                             return std::pair{res, json{{"u", cj(u)}, {"v", cj(w)}, {"levels", p.levels}}};
                         });
                     }});
    }
    v.push_back({"ef_pole_locations", "currents:EF-poles", 0.0, 0, [level](keyed_rng&, const context& c, int) {
                     const auto rep = ff::ef_pole_structure(level(c, 1), 10, c.pol);
                     outcome o;
                     o.residual = rep.poles_ok ? 0.0 : 1.0;
                     json e = json::array();
                     for (cplx x : rep.pole_exponents) e.push_back(cj(x));
                     o.parameters["pole_exponents"] = e;
                     o.parameters["level"] = 1;
                     return o;
                 }});
    for (int sgn : {1, -1}) {
        v.push_back({sgn == 1 ? "ef_residue_H_plus" : "ef_residue_H_minus", "currents:EF-residues", 1e-10, 0,
                     [sgn, level](keyed_rng&, const context& c, int) {
                         const auto rep = ff::ef_pole_structure(level(c, 1), 10, c.pol);
                         outcome o;
                         o.residual = sgn == 1 ? rep.residue_dev_plus : rep.residue_dev_minus;
                         o.parameters["series_order"] = 10;
                         return o;
                     }});
    }
    v.push_back({"kappa_times_kk_contraction", "currents:H-normalization", 1e-10, 0,
                 [level](keyed_rng&, const context& c, int) {
                     const auto rep = ff::ef_pole_structure(level(c, 1), 10, c.pol);
                     outcome o;
                     o.residual = rep.kappa_kk_dev;
                     o.parameters["value"] = cj(rep.kappa_kk);
                     return o;
                 }});
    for (const char* nm : {"E", "F"}) {
        v.push_back({std::string("dressing_") + nm, "currents:phi_r-dressing", 1e-12, 0,
                     [nm, level](keyed_rng&, const context& c, int) {
                         outcome o;
                         for (double k : {1.0, 2.0})
                             o.residual = std::max(o.residual, ff::dressing_deviation(nm, level(c, k), 20));
                         o.parameters["modes"] = 20;
                         return o;
                     }});
    }
    for (const char* nm : {"K", "E", "F"}) {
        v.push_back({std::string("display_consistency_") + nm, "currents:free-field-display", 1e-12, 0,
                     [nm, level](keyed_rng&, const context& c, int) {
                         const auto d = ff::display_consistency(nm, level(c, 1), 20);
                         outcome o;
                         o.residual = std::max(d.coeff_dev, d.zero_mode_dev);
                         o.parameters["coeff_dev"] = d.coeff_dev;
                         o.parameters["zero_mode_dev"] = d.zero_mode_dev;
                         o.parameters["level"] = 1;
                         return o;
                     }});
    }
    for (const char* nm : {"K", "E", "F"}) {
        v.push_back({std::string("grading_") + nm, "currents:d-hat-grading", 1e-12, 0,
                     [nm, level](keyed_rng&, const context& c, int) {
                         outcome o;
                         json per = json::array();
                         for (double k : {1.0, 2.0}) {
                             const auto gr = ff::grading_check(nm, level(c, k));
                             o.residual = std::max(o.residual, gr.deviation);
                             per.push_back({{"level", k}, {"induced", cj(gr.induced)}, {"stated", cj(gr.stated)}});
                         }
                         o.parameters["levels"] = per;
                         return o;
                     }});
    }
    v.push_back({"charges", "currents:P-charges", 0.0, 0, [level](keyed_rng&, const context& c, int) {
                     const std::map<std::string, std::pair<int, int>> expect{{"K", {1, 1}}, {"E", {2, 0}}, {"F", {0, 2}}};
                     outcome o;
                     for (const auto& [nm, e] : expect) {
                         const auto ch = ff::charges(ff::make_spec(nm, level(c, 1)));
                         o.residual = std::max<double>(o.residual, std::abs(ch.p - e.first) + std::abs(ch.p_plus_h - e.second));
                         o.parameters[nm] = {ch.p, ch.p_plus_h};
                     }
                     return o;
                 }});
    return v;
}

std::vector<check_def> checks_for(const std::string& suite, const context& c) {
    if (suite == "theta") return theta_checks(c);
    if (suite == "rmatrix") return rmatrix_checks();
    if (suite == "rll") return rll_checks();
    if (suite == "algebroid") return algebroid_checks();
    if (suite == "freefield") return freefield_checks();
    throw invalid_params("unknown suite: " + suite);
}

}  // namespace

report run_verify(const run_config& cfg, int threads) {
    validate(cfg);
    context ctx{cfg, cfg.params(), elliptic_params(cfg.q, cfg.r, 0.0), cfg.policy(), cfg.samples};
    struct job {
        std::string suite;
        std::size_t index;
        check_def def;
    };
    std::vector<job> jobs;
    for (const auto& s : expand_suites(cfg.suites)) {
        auto defs = checks_for(s, ctx);
        for (std::size_t i = 0; i < defs.size(); ++i) jobs.push_back({s, i, defs[i]});
    }
    report rep;
    rep.config = config_to_json(cfg);
    rep.checks.resize(jobs.size());
    parallel_for(jobs.size(), threads, [&](std::size_t i) {
        const job& jb = jobs[i];
        keyed_rng rng(cfg.seed, jb.suite, jb.index);
        check_result& out = rep.checks[i];
        out.suite = jb.suite;
        out.check_name = jb.def.name;
        out.paper_anchor = jb.def.anchor;
        out.tol = cfg.tol ? *cfg.tol : jb.def.tol;
        const int n = jb.def.samples == 0 ? 0 : (cfg.samples > 0 ? cfg.samples : jb.def.samples);
        try {
            outcome o = jb.def.fn(rng, ctx, n);
            out.residual = o.residual;
            out.parameters = std::move(o.parameters);
        } catch (const std::exception& e) {
            out.residual = std::numeric_limits<double>::infinity();
            out.parameters = {{"error", e.what()}};
        }
        out.parameters["trunc"] = cfg.trunc;
        out.pass = out.residual <= out.tol;
    });
    return rep;
}

std::size_t failed_count(const report& r) {
    return std::size_t(std::count_if(r.checks.begin(), r.checks.end(), [](const check_result& c) { return !c.pass; }));
}

int exit_code(const report& r) { return failed_count(r) == 0 ? 0 : 1; }

json report_json(const report& r, std::optional<double> wall_seconds) {
    json j;
    j["config"] = r.config;
    json checks = json::array();
    json per_suite = json::object();
    for (const auto& c : r.checks) {
        json e;
        e["suite"] = c.suite;
        e["check_name"] = c.check_name;
        e["paper_anchor"] = c.paper_anchor;
        e["parameters"] = c.parameters;
        // inf/nan are not JSON numbers
        e["residual"] = std::isfinite(c.residual) ? json(c.residual) : json(nullptr);
        e["tol"] = c.tol;
        e["pass"] = c.pass;
        checks.push_back(e);
        auto& s = per_suite[c.suite];
        if (s.is_null()) s = {{"passed", 0}, {"failed", 0}};
        s[c.pass ? "passed" : "failed"] = s[c.pass ? "passed" : "failed"].get<int>() + 1;
    }
    j["checks"] = checks;
    const std::size_t failed = failed_count(r);
    j["summary"] = {{"total", r.checks.size()},
                    {"passed", r.checks.size() - failed},
                    {"failed", failed},
                    {"per_suite", per_suite},
                    {"all_pass", failed == 0}};
    if (wall_seconds) j["summary"]["wall_time_s"] = *wall_seconds;
    return j;
}

std::vector<trunc_row> theta_truncation_table(const run_config& cfg, const std::vector<int>& orders) {
    const elliptic_params prm = cfg.params();
    keyed_rng rng(cfg.seed, "theta-truncation", 0);
    std::vector<cplx> pts;
    for (int i = 0; i < 8; ++i) pts.push_back(rng.point(-1.5, 1.5));
    std::vector<trunc_row> t;
    for (int n : orders) {
        double res = 0;
        for (cplx u : pts) res = std::max(res, qseries::quasi_period_r_residual(u, prm, n));
        t.push_back({n, res});
    }
    return t;
}

bool monotone(const std::vector<trunc_row>& t, double floor) {
    for (std::size_t i = 1; i < t.size(); ++i)
        if (t[i].residual > std::max(t[i - 1].residual, floor)) return false;
    return true;
}

json run_sweep(const run_config& cfg, const grid& g, int threads) {
    const std::vector<cplx> qs = g.q.empty() ? std::vector<cplx>{cfg.q} : g.q;
    const std::vector<cplx> rs = g.r.empty() ? std::vector<cplx>{cfg.r} : g.r;
    const std::vector<cplx> cs = g.c.empty() ? std::vector<cplx>{cfg.c} : g.c;
    std::vector<run_config> cells;
    for (cplx q : qs)
        for (cplx r : rs)
            for (cplx c : cs) {
                run_config x = cfg;
                x.q = q;
                x.r = r;
                x.c = c;
                cells.push_back(x);
            }
    const std::vector<int> orders{1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 40};
    std::vector<json> cell_json(cells.size());
    std::vector<report> reps(cells.size());
    // cells run one after another, checks inside a cell in parallel; results are index-addressed
    for (std::size_t i = 0; i < cells.size(); ++i) {
        json cj_ = {{"index", i}, {"q", cj(cells[i].q)}, {"r", cj(cells[i].r)}, {"c", cj(cells[i].c)}};
        try {
            reps[i] = run_verify(cells[i], threads);
            cj_["passed"] = reps[i].checks.size() - failed_count(reps[i]);
            cj_["failed"] = failed_count(reps[i]);
            cj_["pass"] = failed_count(reps[i]) == 0;
            json tt = json::array();
            const auto tab = theta_truncation_table(cells[i], orders);
            for (const auto& row : tab) tt.push_back({{"trunc", row.order}, {"residual", row.residual}});
            cj_["truncation_table"] = tt;
            cj_["truncation_monotone"] = monotone(tab);
        } catch (const std::exception& e) {
            cj_["pass"] = false;
            cj_["error"] = e.what();
        }
        cell_json[i] = cj_;
    }
    report merged;
    merged.config = config_to_json(cfg);
    bool cell_error = false;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cell_json[i].contains("error")) cell_error = true;
        for (auto c : reps[i].checks) {
            if (cells.size() > 1) c.parameters["cell"] = i;
            merged.checks.push_back(std::move(c));
        }
    }
    json j = report_json(merged);
    j["cells"] = cell_json;
    j["grid"] = {{"q", json::array()}, {"r", json::array()}, {"c", json::array()}};
    for (cplx q : qs) j["grid"]["q"].push_back(cj(q));
    for (cplx r : rs) j["grid"]["r"].push_back(cj(r));
    for (cplx c : cs) j["grid"]["c"].push_back(cj(c));
    if (cell_error) j["summary"]["all_pass"] = false;
    j["summary"]["cell_errors"] = cell_error;
    return j;
}

}  // namespace ellq::harness
