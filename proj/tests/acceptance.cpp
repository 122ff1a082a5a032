// Runs the default configuration and prints one PASS/FAIL line per acceptance criterion.

#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "ellq/harness.hpp"

using namespace ellq;
using namespace ellq::harness;

namespace {

struct verdict {
    bool pass = true;
    std::vector<std::string> failed;
};

verdict need(const report& r, const std::string& suite, const std::set<std::string>& names) {
    verdict v;
    std::set<std::string> seen;
    for (const auto& c : r.checks) {
        if (c.suite != suite || !names.count(c.check_name)) continue;
        seen.insert(c.check_name);
        if (!c.pass) {
            v.pass = false;
            std::ostringstream s;
            s << c.check_name << " (residual " << c.residual << ", tol " << c.tol << ")";
            v.failed.push_back(s.str());
        }
    }
    for (const auto& n : names)
        if (!seen.count(n)) {
            v.pass = false;
            v.failed.push_back(n + " (missing)");
        }
    return v;
}

void print(int k, const std::string& what, const verdict& v) {
    std::cout << (v.pass ? "PASS" : "FAIL") << " " << k << " " << what;
    if (!v.failed.empty()) {
        std::cout << ":";
        for (const auto& f : v.failed) std::cout << " " << f << ";";
    }
    std::cout << "\n";
}

}  // namespace

int main() {
    const int threads = max_threads();
    run_config cfg;
    cfg.suites = {"all"};
    const report rep = run_verify(cfg, threads);

    std::map<int, verdict> out;
    out[1] = need(rep, "theta", {"quasi_period_r", "quasi_period_tau", "triple_product_vs_product"});
    out[2] = need(rep, "rmatrix", {"ice_rule", "dybe", "dybe_starred", "u0_degeneration"});
    out[3] = need(rep, "rmatrix", {"kappa_level_zero", "kappa_cancel_vs_extrapolated"});
    out[4] = need(rep, "rll",
                  {"closed_vs_gauss_l1", "closed_vs_gauss_l2", "l_vs_fused_l1", "l_vs_fused_l2", "l_vs_fused_l3",
                   "rll_l1_l1", "rll_l1_l2", "rll_l2_l1", "rll_l2_l2"});
    out[5] = need(rep, "algebroid",
                  {"coassociativity", "counit", "antipode_left", "antipode_right", "coproduct_preserves_rll",
                   "antipode_preserves_rll"});
    out[6] = need(rep, "freefield",
                  {"alpha_commutator", "exchange_EE", "exchange_FF", "exchange_KK", "exchange_KE", "exchange_KF",
                   "exchange_H_plus_minus", "exchange_H_same", "ef_pole_locations", "ef_residue_H_plus",
                   "ef_residue_H_minus"});

    // harness: determinism across thread counts, exit-code contract, truncation table
    verdict h;
    {
        run_config small = cfg;
        small.samples = 2;
        const std::string a = report_json(run_verify(small, 1)).dump();
        const std::string b = report_json(run_verify(small, std::max(2, threads))).dump();
        const std::string c = report_json(run_verify(small, 1)).dump();
        if (a != b || a != c) {
            h.pass = false;
            h.failed.push_back("reports differ between runs");
        }
        run_config strict = small;
        strict.suites = {"rll"};
        strict.tol = 1e-15;
        const report bad = run_verify(strict, threads);
        run_config easy = small;
        easy.suites = {"rmatrix"};
        const report good = run_verify(easy, threads);
        const bool contract = exit_code(bad) != 0 && failed_count(bad) > 0 && exit_code(good) == 0 &&
                              failed_count(good) == 0 && (exit_code(rep) == 0) == (failed_count(rep) == 0);
        if (!contract) {
            h.pass = false;
            h.failed.push_back("exit code contract");
        }
        const auto table = theta_truncation_table(cfg, {1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 40});
        if (!monotone(table)) {
            h.pass = false;
            h.failed.push_back("truncation table not monotone");
        }
    }
    out[7] = h;

    const char* names[] = {"",
                           "theta suite",
                           "R-matrix suite",
                           "kappa",
                           "evaluation representation suite",
                           "algebroid suite",
                           "free-field suite",
                           "harness"};
    bool all = true;
    for (const auto& [k, v] : out) {
        print(k, names[k], v);
        all = all && v.pass;
    }
    return all ? 0 : 1;
}
