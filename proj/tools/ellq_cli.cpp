#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ellq/evalrep.hpp"
#include "ellq/harness.hpp"
#include "ellq/qseries.hpp"
#include "ellq/rmatrix.hpp"

using namespace ellq;
using harness::json;

namespace {

struct common_flags {
    std::string config;
    std::vector<std::string> suites;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::optional<int> trunc;
    std::optional<int> samples;
    std::string out;
    std::string precision;
    std::string q, r, c;
    bool timing = false;
};

void add_common(CLI::App* app, common_flags& f) {
    app->add_option("--config", f.config, "JSON run configuration");
    app->add_option("--suite", f.suites, "theta, rmatrix, rll, algebroid, freefield or all (repeatable, comma separated)")
        ->delimiter(',');
    app->add_option("--seed", f.seed, "random seed");
    app->add_option("--tol", f.tol, "override every check tolerance");
    app->add_option("--trunc", f.trunc, "series truncation order N");
    app->add_option("--samples", f.samples, "points per sampled check (0 = defaults)");
    app->add_option("--out", f.out, "write the JSON report here instead of stdout");
    app->add_option("--precision", f.precision, "double or extended[:digits]");
    app->add_option("--q", f.q, "nome q, e.g. 0.35,0.05 or 0.35+0.05i");
    app->add_option("--r", f.r, "r");
    app->add_option("--c", f.c, "level c");
}

harness::run_config build_config(const common_flags& f) {
    harness::run_config cfg = f.config.empty() ? harness::run_config{} : harness::load_config(f.config);
    if (!f.suites.empty()) cfg.suites = f.suites;
    if (f.seed) cfg.seed = *f.seed;
    if (f.tol) cfg.tol = *f.tol;
    if (f.trunc) cfg.trunc = *f.trunc;
    if (f.samples) cfg.samples = *f.samples;
    if (!f.precision.empty()) cfg.precision = harness::parse_precision(f.precision);
    if (!f.q.empty()) cfg.q = harness::parse_complex(f.q);
    if (!f.r.empty()) cfg.r = harness::parse_complex(f.r);
    if (!f.c.empty()) cfg.c = harness::parse_complex(f.c);
    harness::validate(cfg);
    return cfg;
}

void emit(const json& j, const std::string& out, int indent = 2) {
    const std::string s = j.dump(indent) + "\n";
    if (out.empty()) {
        std::cout << s;
        return;
    }
    std::ofstream o(out, std::ios::binary);
    if (!o) throw invalid_params("cannot write " + out);
    o << s;
}

json cj(cplx z) { return json::array({z.real(), z.imag()}); }

json mat_json(const dynrep::cmat& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int k = 0; k < m.cols(); ++k) row.push_back(cj(m(i, k)));
        rows.push_back(row);
    }
    return rows;
}

struct eval_flags {
    std::string what;
    std::string u = "0.3,0.1", s = "0.4,0.2", v = "0,0", P = "0.4,0.2";
    int l = 1;
    bool starred = false;
};

json run_eval(const eval_flags& e, const harness::run_config& cfg) {
    const auto prm = cfg.params();
    auto pol = cfg.policy();
    auto hi = pol;
    hi.order += 10;
    const cplx u = harness::parse_complex(e.u), s = harness::parse_complex(e.s);
    json j;
    j["what"] = e.what;
    j["trunc"] = cfg.trunc;
    if (e.what == "theta") {
        j["u"] = cj(u);
        j["starred"] = e.starred;
        if (cfg.precision.extended) {
            const auto p = e.starred ? prm.starred().convert<long double>() : prm.convert<long double>();
            const std::complex<long double> ul(u.real(), u.imag());
            const auto a = qseries::bracket(ul, p, pol.order), b = qseries::bracket(ul, p, hi.order);
            std::ostringstream re, im;
            re.precision(std::min(cfg.precision.digits, 18));
            im.precision(std::min(cfg.precision.digits, 18));
            re << a.real();
            im << a.imag();
            j["value"] = {re.str(), im.str()};
            j["est_error"] = double(std::abs(a - b));
        } else {
            const auto t = qseries::bracket_checked(u, prm, e.starred, pol);
            j["value"] = cj(t.value);
            j["est_error"] = t.est_error;
        }
    } else if (e.what == "rmat") {
        const auto r = rmatrix::r_matrix(u, s, prm, e.starred, pol);
        const auto r2 = rmatrix::r_matrix(u, s, prm, e.starred, hi);
        j["u"] = cj(u);
        j["s"] = cj(s);
        j["starred"] = e.starred;
        j["bare"] = mat_json(r.bare);
        j["prefactor"] = cj(r.prefactor);
        j["est_error"] = dynrep::max_abs(r.full() - r2.full());
    } else if (e.what == "kappa") {
        const cplx k = rmatrix::kappa(prm, pol), k2 = rmatrix::kappa(prm, hi);
        j["c"] = cj(prm.c());
        j["value"] = cj(k);
        j["est_error"] = std::abs(k - k2);
        if (prm.c() != cplx(0)) j["extrapolated"] = cj(rmatrix::kappa_extrapolated(prm, pol));
    } else if (e.what == "fuse") {
        const auto r = rmatrix::fuse_r(e.l, u, s, prm, pol);
        const auto r2 = rmatrix::fuse_r(e.l, u, s, prm, hi);
        j["l"] = e.l;
        j["u"] = cj(u);
        j["s"] = cj(s);
        j["matrix"] = mat_json(r.full());
        j["est_error"] = dynrep::max_abs(r.full() - r2.full());
    } else if (e.what == "lop") {
        // evaluation modules are level zero
        const elliptic_params p0(cfg.q, cfg.r, 0.0);
        const evalrep::eval_rep rep{e.l, harness::parse_complex(e.v)};
        const cplx P = harness::parse_complex(e.P);
        const auto L = evalrep::l_operator(u, rep, evalrep::l_method::closed_form, p0, pol);
        const auto L2 = evalrep::l_operator(u, rep, evalrep::l_method::closed_form, p0, hi);
        static const char* names[4] = {"++", "+-", "-+", "--"};
        double err = 0;
        for (int i = 0; i < 4; ++i) {
            const auto m = L[i](P);
            j["L"][names[i]] = mat_json(m);
            err = std::max(err, dynrep::max_abs(m - L2[i](P)));
        }
        j["l"] = e.l;
        j["u"] = cj(u);
        j["v"] = cj(rep.v);
        j["P"] = cj(P);
        j["est_error"] = err;
    } else {
        throw invalid_params("eval: unknown quantity " + e.what);
    }
    return j;
}

std::vector<cplx> parse_list(const std::string& s) {
    std::vector<cplx> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ';'))
        if (!item.empty()) out.push_back(harness::parse_complex(item));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical verification of elliptic quantum group identities"};
    app.require_subcommand(1);

    common_flags fe, fv, fs;
    eval_flags ev;
    auto* eval = app.add_subcommand("eval", "print a single quantity");
    add_common(eval, fe);
    eval->add_option("what", ev.what, "theta | rmat | kappa | fuse | lop")
        ->required()
        ->check(CLI::IsMember({"theta", "rmat", "kappa", "fuse", "lop"}));
    eval->add_option("--u", ev.u, "spectral parameter");
    eval->add_option("--s", ev.s, "dynamical parameter");
    eval->add_option("--v", ev.v, "evaluation point (lop)");
    eval->add_option("--P", ev.P, "dynamical variable P (lop)");
    eval->add_option("--l", ev.l, "spin l (fuse, lop)")->check(CLI::Range(1, 8));
    eval->add_flag("--starred", ev.starred, "use r* and p*");

    auto* verify = app.add_subcommand("verify", "run check suites and write a JSON report");
    add_common(verify, fv);
    verify->add_flag("--timing", fv.timing, "add wall time to the summary (breaks byte-identical output)");

    std::string gq, gr, gc;
    auto* sweep = app.add_subcommand("sweep", "run suites over a (q, r, c) grid");
    add_common(sweep, fs);
    sweep->add_option("--grid-q", gq, "semicolon separated q values");
    sweep->add_option("--grid-r", gr, "semicolon separated r values");
    sweep->add_option("--grid-c", gc, "semicolon separated c values");
    sweep->add_flag("--timing", fs.timing, "add wall time to the summary");

    CLI11_PARSE(app, argc, argv);

    try {
        const int threads = harness::max_threads();
        if (*eval) {
            const auto cfg = build_config(fe);
            emit(run_eval(ev, cfg), fe.out, -1);
            return 0;
        }
        if (*verify) {
            const auto cfg = build_config(fv);
            const auto t0 = std::chrono::steady_clock::now();
            const auto rep = harness::run_verify(cfg, threads);
            std::optional<double> wall;
            if (fv.timing) wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            emit(harness::report_json(rep, wall), fv.out);
            const auto failed = harness::failed_count(rep);
            std::cerr << rep.checks.size() - failed << "/" << rep.checks.size() << " checks passed\n";
            for (const auto& c : rep.checks)
                if (!c.pass) std::cerr << "  FAIL " << c.suite << "." << c.check_name << " residual " << c.residual << " tol " << c.tol << "\n";
            return harness::exit_code(rep);
        }
        if (*sweep) {
            const auto cfg = build_config(fs);
            harness::grid g{parse_list(gq), parse_list(gr), parse_list(gc)};
            const auto t0 = std::chrono::steady_clock::now();
            json j = harness::run_sweep(cfg, g, threads);
            if (fs.timing)
                j["summary"]["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            emit(j, fs.out);
            std::cerr << j["summary"]["passed"] << "/" << j["summary"]["total"] << " checks passed over "
                      << j["cells"].size() << " cells\n";
            return j["summary"]["all_pass"].get<bool>() ? 0 : 1;
        }
    } catch (const pole_proximity& e) {
        std::cerr << "pole proximity: " << e.what()
                  << "\n  the point sits on (or near) a zero of a denominator; shift the spectral or dynamical"
                     " parameter off the lattice Z + r Z, e.g. add a small imaginary part\n";
        return 2;
    } catch (const invalid_params& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
