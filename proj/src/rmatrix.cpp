#include "ellq/rmatrix.hpp"

#include <algorithm>

#include "ellq/dynrep.hpp"

namespace ellq::rmatrix {

namespace {

cplx br(cplx u, const elliptic_params& prm, int order) { return qseries::bracket(u, prm, order); }

void guard(cplx v, const truncation_policy& pol, const char* what) {
    if (std::abs(v) < pol.pole_tol) throw pole_proximity(what);
}

}  // namespace

cplx rho_plus(cplx u, const elliptic_params& prm, bool starred, const truncation_policy& pol) {
    const elliptic_params pp = starred ? prm.starred() : prm;
    const cplx z = pp.qpow(2.0 * u);
    // only the denominator matters; {1/z} vanishes at u = 0 and rho+(0) = 0 is a value
    const cplx p = pp.p();
    auto cb = [&](cplx x) { return qseries::curly(x, pp, pol.order); };
    const cplx den = cb(p * z) * cb(p * pp.qpow(4.0) * z) * cb(pp.qpow(2.0) / z);
    if (std::abs(den) < pol.pole_tol) throw pole_proximity("rho_plus: denominator near zero");
    return rho_plus_t(u, pp, pol.order);
}

cplx rho(cplx u, const elliptic_params& prm, const truncation_policy& pol) {
    return rho_plus(u, prm, true, pol) / rho_plus(u, prm, false, pol);
}

cplx rho_kl(int k, int l, cplx u, const elliptic_params& prm, const truncation_policy& pol) {
    const cplx z = prm.qpow(2.0 * u);
    const cplx p = prm.p();
    auto cb = [&](cplx x) { return qseries::curly(x, prm, pol.order); };
    auto qp = [&](double a) { return prm.qpow(a); };
    const double a = k - l + 2, b = -k + l + 2, c = k + l + 2, d = -k - l + 2;
    const cplx num = cb(p * qp(a) * z) * cb(p * qp(b) * z) * cb(qp(c) / z) * cb(qp(d) / z);
    const cplx den = cb(p * qp(c) * z) * cb(p * qp(d) * z) * cb(qp(a) / z) * cb(qp(b) / z);
    guard(den, pol, "rho_kl: denominator near zero");
    return qp(k * l / 2.0) * num / den;
}

cplx phi_l(int l, cplx x, const elliptic_params& prm, const truncation_policy& pol) {
    return -prm.qpow(-double(l) * x / prm.r()) / rho_kl(1, l, x, prm, pol) * br(x + (l + 1) / 2.0, prm, pol.order);
}

weights4 boltzmann(cplx u, cplx s, const elliptic_params& prm, bool starred, const truncation_policy& pol) {
    const elliptic_params pp = starred ? prm.starred() : prm;
    const int n = pol.order;
    const cplx bs = br(s, pp, n);
    const cplx b1u = br(1.0 + u, pp, n);
    guard(bs, pol, "r_matrix: [s] near zero");
    guard(b1u, pol, "r_matrix: [1+u] near zero");
    const cplx bu = br(u, pp, n);
    const cplx one = br(1.0, pp, n);
    weights4 w;
    w.b = br(s + 1.0, pp, n) * br(s - 1.0, pp, n) / (bs * bs) * bu / b1u;
    w.c = one / bs * br(s + u, pp, n) / b1u;
    w.cbar = one / bs * br(s - u, pp, n) / b1u;
    w.bbar = bu / b1u;
    return w;
}

rmatrix_block r_matrix(cplx u, cplx s, const elliptic_params& prm, bool starred, const truncation_policy& pol) {
    const weights4 w = boltzmann(u, s, prm, starred, pol);
    rmatrix_block r;
    r.bare = cmat::Zero(4, 4);
    r.bare(0, 0) = 1.0;
    r.bare(3, 3) = 1.0;
    r.bare(1, 1) = w.b;
    r.bare(1, 2) = w.c;
    r.bare(2, 1) = w.cbar;
    r.bare(2, 2) = w.bbar;
    r.prefactor = rho_plus(u, prm, starred, pol);
    r.s = s;
    return r;
}

namespace {

// xi(z; pm, q) with the (1 - q^2 z) factor of (q^2 z; pm, q^4) removed
cplx xi_reduced(cplx z, cplx pm, const elliptic_params& prm, int n) {
    const cplx q2 = prm.qpow(2.0), q4 = prm.qpow(4.0);
    const std::vector<cplx> b{pm, q4};
    // (x; pm, q^4) without its (0,0) factor = (x pm; pm, q^4)_{n-1} (x q^4; q^4)_{n-1}
    const cplx x = q2 * z;
    const cplx lead = qseries::pochhammer_multi(x * pm, b, n - 1) * qseries::q_pochhammer(x * q4, q4, n - 1);
    return lead * qseries::pochhammer_multi(pm * q2 * z, b, n) /
           (qseries::pochhammer_multi(q4 * z, b, n) * qseries::pochhammer_multi(pm * z, b, n));
}

cplx xi_raw(cplx z, cplx pm, const elliptic_params& prm, int n) {
    const cplx q2 = prm.qpow(2.0), q4 = prm.qpow(4.0);
    const std::vector<cplx> b{pm, q4};
    return qseries::pochhammer_multi(q2 * z, b, n) * qseries::pochhammer_multi(pm * q2 * z, b, n) /
           (qseries::pochhammer_multi(q4 * z, b, n) * qseries::pochhammer_multi(pm * z, b, n));
}

}  // namespace

cplx kappa_moduli(cplx p_num, cplx p_den, const elliptic_params& prm, const truncation_policy& pol) {
    const cplx z = prm.qpow(-2.0);
    return xi_reduced(z, p_num, prm, pol.order) / xi_reduced(z, p_den, prm, pol.order);
}

cplx kappa(const elliptic_params& prm, const truncation_policy& pol) {
    if (prm.c() == cplx(0)) return 1.0;
    return kappa_moduli(prm.pstar(), prm.p(), prm, pol);
}

cplx kappa_extrapolated(const elliptic_params& prm, const truncation_policy& pol) {
    const cplx z0 = prm.qpow(-2.0);
    auto f = [&](double eps) {
        const cplx z = z0 * (1.0 + eps);
        return xi_raw(z, prm.pstar(), prm, pol.order) / xi_raw(z, prm.p(), prm, pol.order);
    };
    const cplx f3 = f(1e-3), f4 = f(1e-4), f5 = f(1e-5);
    const cplx r34 = (10.0 * f4 - f3) / 9.0;
    const cplx r45 = (10.0 * f5 - f4) / 9.0;
    return (100.0 * r45 - r34) / 99.0;
}

namespace {

using dynrep::dyn_op;
using dynrep::lblock;

// (L_{ab})_{mu' mu}(P) = R(x, P)_{(a mu'),(b mu)}, Q charge of the sign of b
lblock l_from_r(cplx x, const elliptic_params& prm, const truncation_policy& pol) {
    lblock out;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const int e1 = dynrep::aux_sign(a), e2 = dynrep::aux_sign(b);
            out[dynrep::aux_index(a, b)] = dyn_op(2, 2, -e1, -e2, [=](cplx P) -> cmat {
                const cmat r = r_matrix(x, P, prm, false, pol).full();
                cmat m(2, 2);
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j) m(i, j) = r(a * 2 + i, b * 2 + j);
                return m;
            });
        }
    return out;
}

}  // namespace

rmatrix_block fuse_r(int l, cplx u, cplx s, const elliptic_params& prm, const truncation_policy& pol) {
    if (l < 1) throw domain_error("fuse_r: l >= 1");
    if (l == 1) return r_matrix(u, s, prm, false, pol);
    // chain points x_i = u + i - (l+1)/2
    const std::vector<int> w1 = dynrep::weights(1);
    lblock chain = l_from_r(u + 1.0 - (l + 1) / 2.0, prm, pol);
    for (int i = 2; i <= l; ++i) chain = dynrep::coproduct(chain, l_from_r(u + double(i) - (l + 1) / 2.0, prm, pol), w1);
    const lblock fused = dynrep::fuse_restrict(chain, l, 1e-8);
    const int d = l + 1;
    rmatrix_block r;
    r.d1 = 2;
    r.d2 = d;
    r.s = s;
    r.bare = cmat::Zero(2 * d, 2 * d);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) r.bare.block(a * d, b * d, d, d) = fused[dynrep::aux_index(a, b)](s);
    return r;
}

cmat embed3(int i, int j, const std::vector<std::vector<int>>& w, const block_fn& blk,
            const std::function<cplx(int, int, int)>& s_of) {
    const int d[3] = {int(w[0].size()), int(w[1].size()), int(w[2].size())};
    const int k = 3 - i - j;
    const int n = d[0] * d[1] * d[2];
    cmat out = cmat::Zero(n, n);
    auto flat = [&](int a0, int a1, int a2) { return (a0 * d[1] + a1) * d[2] + a2; };
    std::vector<std::pair<cplx, cmat>> cache;
    int a[3];
    for (a[0] = 0; a[0] < d[0]; ++a[0])
        for (a[1] = 0; a[1] < d[1]; ++a[1])
            for (a[2] = 0; a[2] < d[2]; ++a[2]) {
                // column = input basis vector
                const cplx s = s_of(w[0][a[0]], w[1][a[1]], w[2][a[2]]);
                auto hit = std::find_if(cache.begin(), cache.end(), [&](const auto& e) { return e.first == s; });
                if (hit == cache.end()) {
                    cache.emplace_back(s, blk(s));
                    hit = cache.end() - 1;
                }
                const cmat& m = hit->second;
                const int col_local = a[i] * d[j] + a[j];
                for (int bi = 0; bi < d[i]; ++bi)
                    for (int bj = 0; bj < d[j]; ++bj) {
                        const cplx v = m(bi * d[j] + bj, col_local);
                        if (v == cplx(0)) continue;
                        int b[3];
                        b[i] = bi;
                        b[j] = bj;
                        b[k] = a[k];
                        out(flat(b[0], b[1], b[2]), flat(a[0], a[1], a[2])) += v;
                    }
            }
    return out;
}

namespace {

double dybe_generic(const block_fn& r12_of_x12, const block_fn& r13, const block_fn& r23,
                    const std::vector<std::vector<int>>& w, cplx s) {
    using dynrep::rel_diff;
    const cmat lhs = embed3(0, 1, w, r12_of_x12, [s](int, int, int h3) { return s + double(h3); }) *
                     embed3(0, 2, w, r13, [s](int, int, int) { return s; }) *
                     embed3(1, 2, w, r23, [s](int h1, int, int) { return s + double(h1); });
    const cmat rhs = embed3(1, 2, w, r23, [s](int, int, int) { return s; }) *
                     embed3(0, 2, w, r13, [s](int, int h2, int) { return s + double(h2); }) *
                     embed3(0, 1, w, r12_of_x12, [s](int, int, int) { return s; });
    return rel_diff(lhs, rhs);
}

}  // namespace

double dybe_residual(cplx u1, cplx u2, cplx u3, cplx s, const elliptic_params& prm, bool starred,
                     const truncation_policy& pol) {
    auto mk = [&](cplx x) -> block_fn {
        return [=, &prm, &pol](cplx ss) { return r_matrix(x, ss, prm, starred, pol).full(); };
    };
    const std::vector<std::vector<int>> w{{1, -1}, {1, -1}, {1, -1}};
    return dybe_generic(mk(u1 - u2), mk(u1 - u3), mk(u2 - u3), w, s);
}

double mixed_dybe_residual(int l, cplx u1, cplx u2, cplx u3, cplx s, const elliptic_params& prm,
                           const truncation_policy& pol) {
    auto r11 = [&](cplx x) -> block_fn {
        return [=, &prm, &pol](cplx ss) { return r_matrix(x, ss, prm, false, pol).full(); };
    };
    auto r1l = [&](cplx x) -> block_fn {
        return [=, &prm, &pol](cplx ss) { return fuse_r(l, x, ss, prm, pol).full(); };
    };
    const std::vector<std::vector<int>> w{{1, -1}, {1, -1}, dynrep::weights(l)};
    return dybe_generic(r11(u1 - u2), r1l(u1 - u3), r1l(u2 - u3), w, s);
}

double ice_violation(const rmatrix_block& r) {
    const std::vector<int> w1 = r.d1 == 2 ? std::vector<int>{1, -1} : dynrep::weights(r.d1 - 1);
    const std::vector<int> w2 = dynrep::weights(r.d2 - 1);
    double worst = 0;
    for (int a = 0; a < r.d1; ++a)
        for (int b = 0; b < r.d2; ++b)
            for (int c = 0; c < r.d1; ++c)
                for (int d = 0; d < r.d2; ++d)
                    if (w1[a] + w2[b] != w1[c] + w2[d])
                        worst = std::max(worst, std::abs(r.bare(a * r.d2 + b, c * r.d2 + d)));
    return worst;
}

}  // namespace ellq::rmatrix
