#include "ellq/algebroid.hpp"

#include <algorithm>
#include <map>

#include "ellq/qseries.hpp"
#include "ellq/rmatrix.hpp"

namespace ellq::algebroid {

namespace {

using dynrep::aux_index;

int slot(int e) { return e == 1 ? 0 : 1; }

lblock closed(cplx u, const eval_rep& rep, const elliptic_params& prm, const truncation_policy& pol) {
    return evalrep::l_operator(u, rep, evalrep::l_method::closed_form, prm, pol);
}

double graded_diff(const dyn_op& a, const dyn_op& b, cplx P) {
    if (a.alpha() != b.alpha() || a.beta() != b.beta()) return 1.0;
    return dynrep::rel_diff(a(P), b(P));
}

}  // namespace

dyn_op coproduct_realized(int e1, int e2, cplx u, const eval_rep& a, const eval_rep& b, const elliptic_params& prm,
                          const truncation_policy& pol) {
    const lblock c = dynrep::coproduct(closed(u, a, prm, pol), closed(u, b, prm, pol), b.weights());
    return c[aux_index(slot(e1), slot(e2))];
}

double coassociativity(cplx u, const eval_rep& a, const eval_rep& b, const eval_rep& c, cplx P,
                       const elliptic_params& prm, const truncation_policy& pol) {
    const lblock la = closed(u, a, prm, pol), lb = closed(u, b, prm, pol), lc = closed(u, c, prm, pol);
    const std::vector<int> wb = b.weights(), wc = c.weights();
    const lblock left = dynrep::coproduct(dynrep::coproduct(la, lb, wb), lc, wc);
    const lblock right = dynrep::coproduct(la, dynrep::coproduct(lb, lc, wc), dynrep::tensor_weights(wb, wc));
    double worst = 0;
    for (int i = 0; i < 4; ++i) worst = std::max(worst, graded_diff(left[i], right[i], P));
    return worst;
}

dyn_op counit(int e1, int e2) {
    const cplx v = e1 == e2 ? 1.0 : 0.0;
    return dyn_op(1, 1, -e1, -e2, [v](cplx) -> cmat { return cmat::Constant(1, 1, v); });
}

double counit_check(int e1, int e2, cplx u, const eval_rep& rep, cplx P, const elliptic_params& prm,
                    const truncation_policy& pol) {
    const lblock l = closed(u, rep, prm, pol);
    const dyn_op& x = l[aux_index(slot(e1), slot(e2))];
    const std::vector<int> trivial{0};
    // x (x) T = x = T (x) x on V (x) C and C (x) V
    dyn_op left = dynrep::tensor(counit(e1, 1), l[aux_index(slot(1), slot(e2))], rep.weights()) +
                  dynrep::tensor(counit(e1, -1), l[aux_index(slot(-1), slot(e2))], rep.weights());
    dyn_op right = dynrep::tensor(l[aux_index(slot(e1), slot(1))], counit(1, e2), trivial) +
                   dynrep::tensor(l[aux_index(slot(e1), slot(-1))], counit(-1, e2), trivial);
    return std::max(graded_diff(left, x, P), graded_diff(right, x, P));
}

lblock antipode(cplx u, const eval_rep& rep, const elliptic_params& prm, const truncation_policy& pol) {
    const lblock lm = closed(u - 1.0, rep, prm, pol);
    const std::vector<int> w = rep.weights();
    const int n = pol.order;
    auto B = [prm, n](cplx z) { return qseries::bracket(z, prm, n); };
    auto pref = [&](std::function<cplx(cplx, double)> f) {
        return dynrep::diag_fn([f](cplx P, int h) { return f(P, double(h)); }, w);
    };
    lblock s;
    s[aux_index(0, 0)] = lm[aux_index(1, 1)];
    s[aux_index(0, 1)] = pref([B](cplx P, double h) { return -B(P + h + 1.0) / B(P + h); }) * lm[aux_index(0, 1)];
    s[aux_index(1, 0)] = pref([B](cplx P, double) { return -B(P) / B(P + 1.0); }) * lm[aux_index(1, 0)];
    s[aux_index(1, 1)] = pref([B](cplx P, double h) { return B(P + h + 1.0) * B(P) / (B(P + h) * B(P + 1.0)); }) *
                         lm[aux_index(0, 0)];
    return s;
}

antipode_residuals antipode_check(cplx u, const eval_rep& rep, cplx P, const elliptic_params& prm,
                                  const truncation_policy& pol) {
    const lblock l = closed(u, rep, prm, pol);
    const lblock s = antipode(u, rep, prm, pol);
    const int d = rep.dim();
    antipode_residuals out;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const cmat target = a == b ? cmat(cmat::Identity(d, d)) : cmat(cmat::Zero(d, d));
            const cmat ls = (l[aux_index(a, 0)] * s[aux_index(0, b)])(P) + (l[aux_index(a, 1)] * s[aux_index(1, b)])(P);
            const cmat sl = (s[aux_index(a, 0)] * l[aux_index(0, b)])(P) + (s[aux_index(a, 1)] * l[aux_index(1, b)])(P);
            out.left = std::max(out.left, dynrep::max_abs(ls - target));
            out.right = std::max(out.right, dynrep::max_abs(sl - target));
        }
    return out;
}

double antipode_rll_residual(cplx u1, cplx u2, const eval_rep& rep, cplx P, const elliptic_params& prm,
                             const truncation_policy& pol) {
    const lblock s1 = antipode(u1, rep, prm, pol), s2 = antipode(u2, rep, prm, pol);
    const std::vector<int> w = rep.weights();
    const int d = rep.dim();
    const cplx x = u1 - u2;
    const cmat r_left = rmatrix::r_matrix(x, P, prm, true, pol).full();
    std::map<int, cmat> r_right;
    auto rr = [&](int shift) -> const cmat& {
        auto it = r_right.find(shift);
        if (it == r_right.end())
            it = r_right.emplace(shift, rmatrix::r_matrix(x, P + double(shift), prm, false, pol).full()).first;
        return it->second;
    };
    double res = 0, scale = 0;
    for (int a1 = 0; a1 < 2; ++a1)
        for (int a2 = 0; a2 < 2; ++a2)
            for (int b1 = 0; b1 < 2; ++b1)
                for (int b2 = 0; b2 < 2; ++b2) {
                    cmat lhs = cmat::Zero(d, d), rhs = cmat::Zero(d, d);
                    for (int c1 = 0; c1 < 2; ++c1)
                        for (int c2 = 0; c2 < 2; ++c2) {
                            lhs += r_left(a1 * 2 + a2, c1 * 2 + c2) * (s2[aux_index(c2, b2)] * s1[aux_index(c1, b1)])(P);
                            const dyn_op pr = s1[aux_index(a1, c1)] * s2[aux_index(a2, c2)];
                            cmat m = pr(P);
                            for (int j = 0; j < d; ++j) m.col(j) *= rr(pr.charge() + w[j])(c1 * 2 + c2, b1 * 2 + b2);
                            rhs += m;
                        }
                    res = std::max(res, dynrep::max_abs(lhs - rhs));
                    scale = std::max(scale, dynrep::max_abs(lhs));
                }
    return res / std::max(scale, 1e-300);
}

double coproduct_rll_residual(cplx u1, cplx u2, const eval_rep& rep1, const eval_rep& rep2, cplx P,
                              const elliptic_params& prm, const truncation_policy& pol) {
    return evalrep::rll_residual(u1, u2, rep1, rep2, P, prm, pol);
}

intertwiner_residuals intertwiner_consistency(int n, cplx v1, cplx v2, cplx u, cplx s, const elliptic_params& prm,
                                              const truncation_policy& pol) {
    if (n < 1) throw domain_error("intertwiner_consistency: n >= 1");
    intertwiner_residuals out;
    out.type1 = rmatrix::mixed_dybe_residual(n, v1, v2, u, s, prm, pol);

    using rmatrix::embed3;
    const std::vector<std::vector<int>> w{{1, -1}, {1, -1}, dynrep::weights(n)};
    auto r11 = [&](cplx x) -> rmatrix::block_fn {
        return [=, &prm, &pol](cplx ss) { return rmatrix::r_matrix(x, ss, prm, false, pol).full(); };
    };
    auto r1n = [&](cplx x) -> rmatrix::block_fn {
        return [=, &prm, &pol](cplx ss) { return rmatrix::fuse_r(n, x, ss, prm, pol).full(); };
    };
    // R'_ij(x, s) = R(x, s - h_i - h_j), h the input weights
    const cmat lhs = embed3(0, 1, w, r11(v1 - v2), [s](int h1, int h2, int) { return s - double(h1 + h2); }) *
                     embed3(0, 2, w, r1n(v1 - u), [s](int h1, int h2, int h3) { return s - double(h1 + h2 + h3); }) *
                     embed3(1, 2, w, r1n(v2 - u), [s](int, int h2, int h3) { return s - double(h2 + h3); });
    const cmat rhs = embed3(1, 2, w, r1n(v2 - u), [s](int h1, int h2, int h3) { return s - double(h1 + h2 + h3); }) *
                     embed3(0, 2, w, r1n(v1 - u), [s](int h1, int, int h3) { return s - double(h1 + h3); }) *
                     embed3(0, 1, w, r11(v1 - v2), [s](int h1, int h2, int h3) { return s - double(h1 + h2 + h3); });
    out.type2 = dynrep::rel_diff(lhs, rhs);
    return out;
}

}  // namespace ellq::algebroid
