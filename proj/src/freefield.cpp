#include "ellq/freefield.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ellq/qseries.hpp"
#include "ellq/rmatrix.hpp"

namespace ellq::freefield {

namespace {

constexpr double key_tol = 1e-12;

bool close(cplx a, cplx b, double tol = key_tol) { return std::abs(a - b) < tol; }

cplx qn(cplx x, const elliptic_params& prm) { return qseries::qnumber(x, prm); }

cplx q_minus(const elliptic_params& prm) { return prm.q() - 1.0 / prm.q(); }

}  // namespace

cplx alpha_from_a(int m, const elliptic_params& prm) {
    if (m == 0) throw zero_mode("alpha_0 is not defined");
    if (m > 0) return 1.0;
    const double dm = m;
    return qn(prm.r() * dm, prm) / qn(prm.rstar() * dm, prm) * prm.qpow(prm.c() * std::abs(dm));
}

cplx alpha_commutator(int m, int n, const elliptic_params& prm) {
    if (m == 0 || n == 0) throw zero_mode("alpha_commutator: zero mode");
    if (m + n != 0) return 0.0;
    const double dm = m;
    return qn(2.0 * dm, prm) * qn(prm.c() * dm, prm) / dm * qn(prm.r() * dm, prm) / qn(prm.rstar() * dm, prm);
}

cplx alpha_commutator_via_a(int m, int n, const elliptic_params& prm) {
    if (m == 0 || n == 0) throw zero_mode("alpha_commutator: zero mode");
    if (m + n != 0) return 0.0;
    const double dm = m;
    const cplx c = prm.c();
    const cplx aa = qn(2.0 * dm, prm) * qn(c * dm, prm) / dm * prm.qpow(-c * std::abs(dm));
    return alpha_from_a(m, prm) * alpha_from_a(n, prm) * aa;
}

// ---- factored mode coefficients

qmono qmono::qnum(cplx x, int m) {
    qmono r;
    if (m != 0) r.qn_.push_back({x, m});
    return r;
}

qmono qmono::sum(std::vector<std::pair<cplx, cplx>> we) {
    qmono r;
    r.sums_.push_back(std::move(we));
    return r;
}

qmono qmono::constant(cplx c) {
    qmono r;
    r.cst_ = c;
    return r;
}

qmono qmono::operator*(const qmono& o) const {
    qmono r = *this;
    r.cst_ *= o.cst_;
    r.shift_ += o.shift_;
    r.sums_.insert(r.sums_.end(), o.sums_.begin(), o.sums_.end());
    for (const auto& [x, m] : o.qn_) {
        bool done = false;
        for (auto& [y, my] : r.qn_) {
            if (close(x, y)) {
                my += m;
                done = true;
            } else if (close(x, -y)) {
                // [-x n] = -[x n]
                my += m;
                if (m % 2) r.cst_ = -r.cst_;
                done = true;
            }
            if (done) break;
        }
        if (!done) r.qn_.push_back({x, m});
    }
    std::erase_if(r.qn_, [](const auto& e) { return e.second == 0; });
    return r;
}

qmono qmono::scaled(cplx s) const {
    qmono r = *this;
    r.cst_ *= s;
    return r;
}

cplx qmono::eval(int n, const elliptic_params& prm) const {
    const double dn = n;
    cplx v = cst_ * prm.qpow(shift_ * dn);
    for (const auto& [x, m] : qn_) v *= std::pow(qn(x * dn, prm), m);
    for (const auto& s : sums_) {
        cplx t = 0;
        for (const auto& [w, e] : s) t += w * prm.qpow(e * dn);
        v *= t;
    }
    return v;
}

namespace {

std::vector<kernel_term> merge_terms(std::vector<kernel_term> ts) {
    std::vector<kernel_term> out;
    for (auto& t : ts) {
        std::sort(t.bases.begin(), t.bases.end(), [](cplx a, cplx b) {
            return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
        });
        bool merged = false;
        for (auto& o : out) {
            if (!close(o.e, t.e) || o.bases.size() != t.bases.size()) continue;
            bool same = true;
            for (std::size_t i = 0; i < t.bases.size() && same; ++i) same = close(o.bases[i], t.bases[i]);
            if (!same) continue;
            o.w += t.w;
            merged = true;
            break;
        }
        if (!merged) out.push_back(t);
    }
    std::erase_if(out, [](const kernel_term& t) { return std::abs(t.w) < 1e-13; });
    return out;
}

std::vector<kernel_term> mul_terms(const std::vector<kernel_term>& a, const std::vector<kernel_term>& b) {
    std::vector<kernel_term> out;
    for (const auto& x : a)
        for (const auto& y : b) {
            kernel_term t{x.w * y.w, x.e + y.e, x.bases};
            t.bases.insert(t.bases.end(), y.bases.begin(), y.bases.end());
            out.push_back(t);
        }
    return out;
}

}  // namespace

std::vector<kernel_term> qmono::terms(const elliptic_params& prm) const {
    const cplx Q1 = q_minus(prm);
    std::vector<kernel_term> ts{{cst_, shift_, {}}};
    for (const auto& [x, m] : qn_) {
        std::vector<kernel_term> fac;
        if (m > 0) {
            fac = {{1.0 / Q1, x, {}}, {-1.0 / Q1, -x, {}}};
        } else {
            if (std::abs(x) < key_tol) throw domain_error("qmono: 1/[0]");
            // 1/[xn] = -(q - 1/q) q^{xn} / (1 - q^{2xn}), or the mirrored form when |q^{2x}| > 1
            if (std::abs(prm.qpow(2.0 * x)) < 1.0)
                fac = {{-Q1, x, {2.0 * x}}};
            else
                fac = {{Q1, -x, {-2.0 * x}}};
        }
        for (int i = 0; i < std::abs(m); ++i) ts = merge_terms(mul_terms(ts, fac));
    }
    for (const auto& s : sums_) {
        std::vector<kernel_term> fac;
        for (const auto& [w, e] : s) fac.push_back({w, e, {}});
        ts = merge_terms(mul_terms(ts, fac));
    }
    return merge_terms(ts);
}

cplx term_sum(const std::vector<kernel_term>& t, int n, const elliptic_params& prm) {
    const double dn = n;
    cplx s = 0;
    for (const auto& k : t) {
        cplx v = k.w * prm.qpow(k.e * dn);
        for (cplx b : k.bases) v /= 1.0 - prm.qpow(b * dn);
        s += v;
    }
    return s;
}

namespace {

void log_poch(cplx z, const std::vector<cplx>& bases, std::size_t i, int left, cplx& acc, double& min_factor) {
    if (i == bases.size()) {
        const cplx f = 1.0 - z;
        min_factor = std::min(min_factor, std::abs(f));
        if (f != cplx(0)) acc += std::log(f);
        return;
    }
    cplx zz = z;
    for (int n = 0; n <= left; ++n) {
        log_poch(zz, bases, i + 1, left - n, acc, min_factor);
        zz *= bases[i];
    }
}

}  // namespace

cplx kernel_value(const std::vector<kernel_term>& terms, cplx y, const elliptic_params& prm, int order,
                  double pole_tol) {
    cplx total = 0;
    for (const auto& t : terms) {
        std::vector<cplx> b;
        for (cplx e : t.bases) {
            b.push_back(prm.qpow(e));
            if (std::abs(b.back()) >= 1.0) throw non_convergent("kernel_value: base outside unit disc");
        }
        cplx acc = 0;
        double mf = 1e300;
        log_poch(prm.qpow(t.e) * y, b, 0, order, acc, mf);
        if (mf < pole_tol) throw annulus_violation("kernel_value: sample point at a kernel pole or zero");
        total += -t.w * acc;
    }
    return std::exp(total);
}

// ---- vertex operator specs

vertex_spec make_spec(const std::string& name, const elliptic_params& prm, spec_source src) {
    const cplx k = prm.c(), r = prm.r(), rs = prm.rstar();
    vertex_spec s;
    s.name = name;
    auto Q = [](cplx x, int m = 1) { return qmono::qnum(x, m); };
    auto N = [&prm](cplx x, int n) { return qn(x * double(n), prm); };
    if (name == "K" || name == "Hplus" || name == "Hminus") {
        const double sg = src == spec_source::derived ? 1.0 : -1.0;
        vertex_spec K;
        K.c = (Q(1) * Q(2, -1) * Q(r, -1)).scaled(sg);
        K.d = K.c.scaled(-1.0);
        K.c_raw = [=](int n) { return sg * N(1, n) / (N(2, n) * N(r, n)); };
        K.d_raw = [=](int n) { return -sg * N(1, n) / (N(2, n) * N(r, n)); };
        K.nQ = 1;
        K.nalpha = 0;
        K.f_dyn = {k / (4.0 * r * rs), -2.0 * k / (4.0 * r * rs), 1.0 / (2.0 * r)};
        if (name == "K") {
            K.name = "K";
            return K;
        }
        // H(u) = kappa K(u + s1) K(u + s2)
        const double sigma = name == "Hplus" ? 1.0 : -1.0;
        const cplx s1 = sigma * (r - k / 2.0) / 2.0 + 0.5, s2 = s1 - 1.0;
        s.c = K.c * qmono::sum({{1.0, 2.0 * s1}, {1.0, 2.0 * s2}});
        s.d = K.d * qmono::sum({{1.0, -2.0 * s1}, {1.0, -2.0 * s2}});
        auto kc = K.c_raw, kd = K.d_raw;
        s.c_raw = [=, &prm](int n) { return kc(n) * (prm.qpow(2.0 * s1 * double(n)) + prm.qpow(2.0 * s2 * double(n))); };
        s.d_raw = [=, &prm](int n) { return kd(n) * (prm.qpow(-2.0 * s1 * double(n)) + prm.qpow(-2.0 * s2 * double(n))); };
        s.nQ = 2;
        s.nalpha = 0;
        const lin f = K.f();
        // e^Q z1^{f(P)} e^Q z2^{f(P)} = e^{2Q} z1^{f(P-1)} z2^{f(P)}, z_i = q^{2 s_i} z
        s.f_dyn = {2.0 * f.c0 - f.cP, 2.0 * f.cP, 2.0 * f.ch};
        const cplx lq = prm.log_q();
        s.g = {lq * (2.0 * s1 * (f.c0 - f.cP) + 2.0 * s2 * f.c0), lq * 2.0 * (s1 + s2) * f.cP,
               lq * 2.0 * (s1 + s2) * f.ch};
        return s;
    }
    if (k == cplx(0)) throw domain_error("E, F specs need nonzero level");
    const cplx hs = src == spec_source::derived ? 1.0 / k : cplx(0.5);
    if (name == "E") {
        s.c = Q(k, -1);
        s.d = s.c.scaled(-1.0);
        s.c_raw = [=](int n) { return 1.0 / N(k, n); };
        s.d_raw = [=](int n) { return -1.0 / N(k, n); };
        s.nQ = 2;
        s.nalpha = 1;
        s.f_drinfeld = {hs, 0.0, hs};
        s.f_dyn = {1.0 / rs, -1.0 / rs, 0.0};
        return s;
    }
    if (name == "F") {
        s.c = (Q(rs) * Q(k, -1) * Q(r, -1)).scaled(-1.0);
        s.d = s.c.scaled(-1.0);
        s.c_raw = [=](int n) { return -N(rs, n) / (N(k, n) * N(r, n)); };
        s.d_raw = [=](int n) { return N(rs, n) / (N(k, n) * N(r, n)); };
        s.nQ = 0;
        s.nalpha = -1;
        s.f_drinfeld = {hs, 0.0, -hs};
        s.f_dyn = {-1.0 / r, 1.0 / r, 1.0 / r};
        return s;
    }
    throw bad_generator("unknown current: " + name);
}

namespace {

qmono gamma_mono(const elliptic_params& prm) {
    return qmono::qnum(2) * qmono::qnum(prm.c()) * qmono::qnum(prm.r()) * qmono::qnum(prm.rstar(), -1);
}

}  // namespace

contraction contraction_kernel(const vertex_spec& a, const vertex_spec& b, int order, const elliptic_params& prm) {
    contraction out;
    const qmono m = a.d * b.c * gamma_mono(prm);
    out.terms = m.terms(prm);
    out.log_coeff.assign(order + 1, 0.0);
    for (int n = 1; n <= order; ++n) out.log_coeff[n] = m.eval(n, prm) / double(n);
    out.coeff.assign(order + 1, 0.0);
    out.coeff[0] = 1.0;
    for (int n = 1; n <= order; ++n) {
        cplx s = 0;
        for (int j = 1; j <= n; ++j) s += double(j) * out.log_coeff[j] * out.coeff[n - j];
        out.coeff[n] = s / double(n);
    }
    // f(P,h) e^Q = e^Q f(P-1,h), f(P,h) e^alpha = e^alpha f(P,h+2)
    const lin fa = a.f(), fb = b.f();
    out.zero_exponent_z = -fa.cP * double(b.nQ) + fa.ch * 2.0 * double(b.nalpha);
    out.zero_exponent_w = -(-fb.cP * double(a.nQ) + fb.ch * 2.0 * double(a.nalpha));
    out.zero_constant = (-a.g.cP * double(b.nQ) + a.g.ch * 2.0 * double(b.nalpha)) -
                        (-b.g.cP * double(a.nQ) + b.g.ch * 2.0 * double(a.nalpha));
    return out;
}

pair_kind parse_pair(const std::string& s) {
    static const std::map<std::string, pair_kind> t{{"EE", pair_kind::EE},     {"FF", pair_kind::FF},
                                                    {"KK", pair_kind::KK},     {"KE", pair_kind::KE},
                                                    {"KF", pair_kind::KF},     {"HplusHminus", pair_kind::HpHm},
                                                    {"HpHm", pair_kind::HpHm}, {"HH_same", pair_kind::HH_same}};
    auto it = t.find(s);
    if (it == t.end()) throw bad_generator("unknown pair: " + s);
    return it->second;
}

std::string pair_name(pair_kind p) {
    switch (p) {
        case pair_kind::EE: return "EE";
        case pair_kind::FF: return "FF";
        case pair_kind::KK: return "KK";
        case pair_kind::KE: return "KE";
        case pair_kind::KF: return "KF";
        case pair_kind::HpHm: return "HplusHminus";
        case pair_kind::HH_same: return "HH_same";
    }
    return "?";
}

namespace {

exchange_result exchange_one(const vertex_spec& a, const vertex_spec& b, cplx rhs, cplx u, cplx v,
                             const elliptic_params& prm, const truncation_policy& pol) {
    const int N = pol.order;
    const contraction ab = contraction_kernel(a, b, N, prm);
    const contraction ba = contraction_kernel(b, a, N, prm);
    exchange_result res;
    // raw log-coefficients vs the factored form and its expansion
    auto raw = [&prm](const vertex_spec& x, const vertex_spec& y, int n) {
        return x.d_raw(n) * y.c_raw(n) * alpha_commutator(n, -n, prm);
    };
    for (int n = 1; n <= N; ++n) {
        for (int side = 0; side < 2; ++side) {
            const contraction& c = side == 0 ? ab : ba;
            const cplx want = side == 0 ? raw(a, b, n) : raw(b, a, n);
            const double scale = std::max(std::abs(want), 1e-300);
            const double d1 = std::abs(c.log_coeff[n] - want) / scale;
            const double d2 = std::abs(term_sum(c.terms, n, prm) / double(n) - want) / scale;
            if (std::abs(want) < 1e-250 && std::abs(c.log_coeff[n]) < 1e-250) continue;
            res.coeff_dev = std::max({res.coeff_dev, d1, d2});
        }
    }
    const cplx lz = 2.0 * u * prm.log_q(), lw = 2.0 * v * prm.log_q();
    const cplx y = prm.qpow(2.0 * (v - u));
    const cplx kab = kernel_value(ab.terms, y, prm, N, pol.pole_tol);
    const cplx kba = kernel_value(ba.terms, 1.0 / y, prm, N, pol.pole_tol);
    res.ratio = kab / kba * std::exp(ab.zero_exponent_z * lz + ab.zero_exponent_w * lw + ab.zero_constant);
    res.rhs = rhs;
    res.value_dev = std::abs(res.ratio / rhs - 1.0);
    res.deviation = std::max(res.coeff_dev, res.value_dev);
    return res;
}

}  // namespace

exchange_result exchange_ratio_check(pair_kind pair, cplx u, cplx v, const elliptic_params& prm,
                                     const truncation_policy& pol) {
    const bool needs_k1 = pair == pair_kind::EE || pair == pair_kind::FF || pair == pair_kind::KE || pair == pair_kind::KF;
    if (needs_k1 && prm.c() != cplx(1.0)) throw domain_error("E/F exchange checks are implemented at level 1");
    const cplx y = u - v;
    const cplx c = prm.c();
    const cplx rs = prm.rstar(), r = prm.r();
    const int N = pol.order;
    auto B = [&](cplx x) { return qseries::bracket(x, prm, false, N); };
    auto Bs = [&](cplx x) { return qseries::bracket(x, prm, true, N); };
    auto spec = [&](const char* nm) { return make_spec(nm, prm); };
    switch (pair) {
        case pair_kind::EE:
            return exchange_one(spec("E"), spec("E"), Bs(y + 1.0) / Bs(y - 1.0), u, v, prm, pol);
        case pair_kind::FF:
            return exchange_one(spec("F"), spec("F"), B(y - 1.0) / B(y + 1.0), u, v, prm, pol);
        case pair_kind::KK:
            return exchange_one(spec("K"), spec("K"), rmatrix::rho(y, prm, pol), u, v, prm, pol);
        case pair_kind::KE:
            return exchange_one(spec("K"), spec("E"), Bs(y + (1.0 - rs) / 2.0) / Bs(y - (1.0 + rs) / 2.0), u, v, prm, pol);
        case pair_kind::KF:
            return exchange_one(spec("K"), spec("F"), B(y - (1.0 + r) / 2.0) / B(y + (1.0 - r) / 2.0), u, v, prm, pol);
        case pair_kind::HpHm:
            return exchange_one(spec("Hplus"), spec("Hminus"),
                                B(y - 1.0 - c / 2.0) / B(y + 1.0 - c / 2.0) * Bs(y + 1.0 + c / 2.0) / Bs(y - 1.0 + c / 2.0),
                                u, v, prm, pol);
        case pair_kind::HH_same: {
            const cplx rhs = B(y - 1.0) / B(y + 1.0) * Bs(y + 1.0) / Bs(y - 1.0);
            exchange_result a = exchange_one(spec("Hplus"), spec("Hplus"), rhs, u, v, prm, pol);
            const exchange_result b = exchange_one(spec("Hminus"), spec("Hminus"), rhs, u, v, prm, pol);
            if (b.deviation > a.deviation) return b;
            return a;
        }
    }
    throw bad_generator("exchange_ratio_check: pair");
}

ef_report ef_pole_structure(const elliptic_params& prm, int order, const truncation_policy& pol) {
    ef_report rep;
    const cplx c = prm.c();
    if (c == cplx(0)) {
        rep.degenerate = true;
        return rep;
    }
    if (c != cplx(1.0)) throw domain_error("EF pole structure is implemented at level 1");
    const vertex_spec E = make_spec("E", prm), F = make_spec("F", prm), K = make_spec("K", prm);
    const qmono ef = E.d * F.c * gamma_mono(prm);

    // net multiplicity of each factor (1 - q^x y) in prod (q^e y; bases)^{-w}
    std::vector<std::pair<cplx, cplx>> net;
    const int depth = pol.order;
    for (const auto& t : ef.terms(prm)) {
        std::vector<cplx> stack{t.e};
        for (cplx b : t.bases) {
            std::vector<cplx> next;
            for (cplx x : stack)
                for (int j = 0; j <= depth; ++j) next.push_back(x + double(j) * b);
            stack = next;
        }
        for (cplx x : stack) {
            auto it = std::find_if(net.begin(), net.end(), [&](const auto& e) { return close(e.first, x, 1e-9); });
            if (it == net.end())
                net.push_back({x, -t.w});
            else
                it->second += -t.w;
        }
    }
    // poles near |y| = 1; far ones are truncation edges
    const double window = 4.0 * std::abs(std::log(std::abs(prm.q())));
    int simple = 0, other = 0;
    for (const auto& [x, m] : net) {
        if (std::abs((x * prm.log_q()).real()) > window) continue;
        if (m.real() < -0.5) {
            rep.pole_exponents.push_back(x);
            if (std::abs(m + 1.0) < 1e-9 && (close(x, c, 1e-9) || close(x, -c, 1e-9)))
                ++simple;
            else
                ++other;
        }
    }
    rep.poles_ok = simple == 2 && other == 0;

    // merged spec at z = q^{s c} w vs H^{+-} at q^{s c/2} w
    const cplx r = prm.r();
    for (int sgn : {1, -1}) {
        double dev = 0;
        for (int n = 1; n <= order; ++n) {
            const double dn = n;
            const cplx ce = E.c_raw(n) * prm.qpow(double(sgn) * c * dn), cf = F.c_raw(n);
            const cplx de = E.d_raw(n) * prm.qpow(-double(sgn) * c * dn), df = F.d_raw(n);
            const cplx base = double(sgn) * (r - c / 2.0) / 2.0 + double(sgn) * c / 4.0;
            const cplx t1 = base + 0.5, t2 = base - 0.5;
            const cplx ch = K.c_raw(n) * (prm.qpow(2.0 * t1 * dn) + prm.qpow(2.0 * t2 * dn));
            const cplx dh = K.d_raw(n) * (prm.qpow(-2.0 * t1 * dn) + prm.qpow(-2.0 * t2 * dn));
            dev = std::max(dev, std::abs(ce + cf - ch) / (std::abs(ce) + std::abs(cf)));
            dev = std::max(dev, std::abs(de + df - dh) / (std::abs(de) + std::abs(df)));
        }
        (sgn == 1 ? rep.residue_dev_plus : rep.residue_dev_minus) = dev;
    }

    // kappa times the contraction of K(u + s1) K(u + s2), relative argument q^{2(s2 - s1)} = q^{-2}
    const qmono kk = K.d * K.c * gamma_mono(prm);
    rep.kappa_kk = rmatrix::kappa(prm, pol) * kernel_value(kk.terms(prm), prm.qpow(-2.0), prm, pol.order, pol.pole_tol);
    rep.kappa_kk_dev = std::abs(rep.kappa_kk - 1.0);
    return rep;
}

grading_result grading_check(const std::string& name, const elliptic_params& prm) {
    const vertex_spec s = make_spec(name, prm);
    const cplx r = prm.r(), rs = prm.rstar();
    auto quad = [&](cplx P, cplx h) {
        return -(P - 1.0) * (P + 1.0) / (4.0 * rs) + (P + h - 1.0) * (P + h + 1.0) / (4.0 * r);
    };
    auto induced = [&](cplx P, cplx h) {
        const cplx dq = quad(P - double(s.nQ), h + 2.0 * double(s.nalpha)) - quad(P, h);
        return dq + s.f_dyn.at(P, h);
    };
    const cplx pts[3][2] = {{{0.3, 0.1}, 1.0}, {-0.7, 3.0}, {{1.9, 0.4}, -2.0}};
    grading_result g;
    g.induced = induced(pts[0][0], pts[0][1]);
    for (const auto& p : pts) g.p_dependence = std::max(g.p_dependence, std::abs(induced(p[0], p[1]) - g.induced));
    if (name == "E") g.stated = -1.0 / rs;
    if (name == "F") g.stated = -1.0 / r;
    g.deviation = std::max(std::abs(g.induced - g.stated), g.p_dependence);
    return g;
}

charge_pair charges(const vertex_spec& s) { return {s.nQ, s.nQ - 2 * s.nalpha}; }

double dressing_deviation(const std::string& name, const elliptic_params& prm, int order) {
    const cplx k = prm.c(), r = prm.r(), rs = prm.rstar();
    const vertex_spec disp = make_spec(name, prm, spec_source::display);
    double dev = 0;
    for (int n = 1; n <= order; ++n) {
        const double dn = n;
        const cplx kn = qn(k * dn, prm);
        // a-mode coefficients of the Drinfeld current and of u^{+-}(z, p)
        cplx A, B;
        if (name == "E") {
            A = 1.0 / kn + prm.qpow(r * dn) / qn(rs * dn, prm);
            B = -1.0 / kn;
        } else if (name == "F") {
            A = -prm.qpow(k * dn) / kn;
            B = prm.qpow(k * dn) / kn - prm.qpow(r * dn) / qn(r * dn, prm);
        } else {
            throw bad_generator("dressing_deviation: E or F");
        }
        // a_{-n} = [r* n]/[r n] q^{-k n} alpha_{-n}
        const cplx c = A * qn(rs * dn, prm) / qn(r * dn, prm) * prm.qpow(-k * dn);
        const cplx d = B;
        dev = std::max(dev, std::abs(c - disp.c_raw(n)) / std::abs(disp.c_raw(n)));
        dev = std::max(dev, std::abs(d - disp.d_raw(n)) / std::abs(disp.d_raw(n)));
    }
    return dev;
}

display_result display_consistency(const std::string& name, const elliptic_params& prm, int order) {
    const vertex_spec a = make_spec(name, prm, spec_source::derived);
    const vertex_spec b = make_spec(name, prm, spec_source::display);
    display_result out;
    for (int n = 1; n <= order; ++n) {
        out.coeff_dev = std::max(out.coeff_dev, std::abs(a.c_raw(n) - b.c_raw(n)) / std::abs(a.c_raw(n)));
        out.coeff_dev = std::max(out.coeff_dev, std::abs(a.d_raw(n) - b.d_raw(n)) / std::abs(a.d_raw(n)));
    }
    const lin fa = a.f(), fb = b.f();
    out.zero_mode_dev = std::max({std::abs(fa.c0 - fb.c0), std::abs(fa.cP - fb.cP), std::abs(fa.ch - fb.ch)});
    return out;
}

}  // namespace ellq::freefield
