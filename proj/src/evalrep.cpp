#include "ellq/evalrep.hpp"

#include <algorithm>
#include <map>

#include "ellq/qseries.hpp"
#include "ellq/rmatrix.hpp"

namespace ellq::evalrep {

namespace {

cplx br(cplx u, const elliptic_params& prm, int order) { return qseries::bracket(u, prm, order); }
cplx qnum(cplx x, const elliptic_params& prm) { return qseries::qnumber(x, prm); }
cplx poch1(cplx z, cplx p, int order) { return qseries::q_pochhammer(z, p, order); }

dyn_op diag_op(int d, int alpha, int beta, std::function<cplx(cplx, int)> f, std::vector<int> w) {
    return dyn_op(d, d, alpha, beta, [=](cplx P) -> cmat {
        cmat m = cmat::Zero(d, d);
        for (int i = 0; i < d; ++i) m(i, i) = f(P, w[i]);
        return m;
    });
}

}  // namespace

generator parse_generator(const std::string& name) {
    static const std::map<std::string, generator> table{{"a_n", generator::a_n},     {"a", generator::a_n},
                                                        {"x_plus", generator::x_plus}, {"x_minus", generator::x_minus},
                                                        {"h", generator::h},           {"c", generator::c},
                                                        {"d", generator::d}};
    auto it = table.find(name);
    if (it == table.end()) throw bad_generator("unknown generator: " + name);
    return it->second;
}

drinfeld_image pi_drinfeld(generator g, int n, const eval_rep& rep, const elliptic_params& prm) {
    const int d = rep.dim(), l = rep.l;
    const std::vector<int> w = rep.weights();
    drinfeld_image out;
    switch (g) {
        case generator::c:
        case generator::d:
            out.op = dyn_op::zero(d, d, 0, 0);
            break;
        case generator::h:
            out.op = diag_op(d, 0, 0, [](cplx, int mu) { return cplx(mu); }, w);
            break;
        case generator::a_n: {
            if (n == 0) throw bad_generator("a_n needs n != 0");
            const cplx wn = prm.qpow(2.0 * rep.v * double(n));
            const cplx q = prm.q();
            const cplx dq = q - 1.0 / q;
            auto qp = [&prm](double a) { return prm.qpow(a); };
            out.op = diag_op(d, 0, 0, [=](cplx, int mu) {
                return wn / double(n) / dq *
                       ((qp(n) + qp(-n)) * qp(double(n) * mu) - (qp((l + 1.0) * n) + qp(-(l + 1.0) * n)));
            }, w);
            break;
        }
        case generator::x_plus:
        case generator::x_minus: {
            const int sg = g == generator::x_plus ? 1 : -1;
            cmat m = cmat::Zero(d, d);
            out.delta.sign = sg;
            for (int k = 0; k < d; ++k) {
                // S^+ v_m = v_{m-1}, S^- v_m = v_{m+1}
                const int kp = k - sg;
                if (kp >= 0 && kp < d) m(kp, k) = qnum((sg * w[k] + l + 2) / 2.0, prm);
                out.delta.support.push_back(rep.v + (w[k] + sg) / 2.0);
            }
            out.op = dyn_op(d, d, 2 * sg, 0, [m](cplx) { return m; });
            out.localized = true;
            break;
        }
    }
    return out;
}

cplx k_eigen(cplx u, int mu, const eval_rep& rep, const elliptic_params& prm, const truncation_policy& pol) {
    const int l = rep.l;
    const cplx p = prm.p();
    const cplx x = u - rep.v;
    // exponent of y = x q^r, with x -> 1/x for the second factor
    auto part = [&](cplx ex, double m) {
        cplx val = 1.0 / poch1(prm.qpow(ex + prm.r() - m), p, pol.order);
        for (double t : {double(l + 1), -double(l + 1)})
            val *= qseries::curly(prm.qpow(ex + prm.r() + t + 1.0), prm, pol.order) /
                   qseries::curly(prm.qpow(ex + prm.r() + t + 3.0), prm, pol.order);
        return val;
    };
    return part(2.0 * x, mu) * part(-2.0 * x, -mu) * prm.qpow(2.0 * x * double(mu) / (2.0 * prm.r()));
}

namespace {

dyn_op k_plus(cplx u, const eval_rep& rep, const elliptic_params& prm, const truncation_policy& pol, bool inverse) {
    const cplx uu = u + (prm.r() + 1.0) / 2.0;
    const int gr = inverse ? 1 : -1;
    return diag_op(rep.dim(), gr, gr, [=](cplx, int mu) {
        const cplx k = k_eigen(uu, mu, rep, prm, pol);
        return inverse ? 1.0 / k : k;
    }, rep.weights());
}

dyn_op e_plus(cplx u, const eval_rep& rep, const elliptic_params& prm, const truncation_policy& pol) {
    const drinfeld_image xp = pi_drinfeld(generator::x_plus, 0, rep, prm);
    const cmat coef = xp.op(0.0);
    const std::vector<int> w = rep.weights();
    const int d = rep.dim(), l = rep.l;
    const cplx astar = 1.0;
    return dyn_op(d, d, 0, -2, [=](cplx P) -> cmat {
        const int n = pol.order;
        const cplx p = prm.p();
        cmat m = cmat::Zero(d, d);
        for (int k = 1; k < d; ++k) {
            const int mu = w[k], mo = mu + 2;
            const cplx up = xp.delta.support[k];
            const cplx rel = up - rep.v;  // z'/w = q^{2 rel}
            cplx U = 1.0;
            for (double t : {double(l + 1), -double(l + 1)}) U *= poch1(p * prm.qpow(2.0 * rel + t), p, n);
            for (double t : {1.0 - mo, -1.0 - mo}) U /= poch1(p * prm.qpow(2.0 * rel + t), p, n);
            const cplx den = br(u - up, prm, n) * br(P + 1.0, prm, n);
            if (std::abs(den) < pol.pole_tol) throw pole_proximity("E+: bracket denominator near zero");
            m(k - 1, k) = astar * U * coef(k - 1, k) * prm.qpow(-2.0 * rel * (P + 1.0) / prm.r()) *
                          br(u - up - P - 1.0, prm, n) * br(1.0, prm, n) / den;
        }
        return m;
    });
}

dyn_op f_plus(cplx u, const eval_rep& rep, const elliptic_params& prm, const truncation_policy& pol) {
    const drinfeld_image xm = pi_drinfeld(generator::x_minus, 0, rep, prm);
    const cmat coef = xm.op(0.0);
    const std::vector<int> w = rep.weights();
    const int d = rep.dim(), l = rep.l;
    const cplx q = prm.q();
    const cplx a = (q - 1.0 / q) / (qseries::bracket(1.0, prm, true, pol.order) * rmatrix::kappa(prm, pol));
    return dyn_op(d, d, -2, 0, [=](cplx P) -> cmat {
        const int n = pol.order;
        const cplx p = prm.p();
        cmat m = cmat::Zero(d, d);
        for (int k = 0; k + 1 < d; ++k) {
            const int mu = w[k];
            const cplx up = xm.delta.support[k];
            const cplx rel = up - rep.v;  // w/z' = q^{-2 rel}
            cplx U = 1.0;
            for (double t : {double(l + 1), -double(l + 1)}) U *= poch1(p * prm.qpow(-2.0 * rel + t), p, n);
            for (double t : {mu + 1.0, mu - 1.0}) U /= poch1(p * prm.qpow(-2.0 * rel + t), p, n);
            const cplx den = br(u - up, prm, n) * br(P + double(mu) - 1.0, prm, n);
            if (std::abs(den) < pol.pole_tol) throw pole_proximity("F+: bracket denominator near zero");
            m(k + 1, k) = a * coef(k + 1, k) * U * prm.qpow(2.0 * rel * (P + double(mu) - 1.0) / prm.r()) *
                          br(u - up + P + double(mu) - 1.0, prm, n) * br(1.0, prm, n) / den;
        }
        return m;
    });
}

}  // namespace

dyn_op half_current(half_kind kind, cplx u, const eval_rep& rep, const elliptic_params& prm,
                    const truncation_policy& pol) {
    switch (kind) {
        case half_kind::Kplus:
            return k_plus(u, rep, prm, pol, false);
        case half_kind::Eplus:
            return e_plus(u, rep, prm, pol);
        case half_kind::Fplus:
            return f_plus(u, rep, prm, pol);
    }
    throw bad_generator("half_current: unknown kind");
}

lblock l_gauss_raw(cplx u, const eval_rep& rep, const elliptic_params& prm, const truncation_policy& pol) {
    const dyn_op kp1 = k_plus(u - 1.0, rep, prm, pol, false);
    const dyn_op ki = k_plus(u, rep, prm, pol, true);
    const dyn_op ep = e_plus(u, rep, prm, pol);
    const dyn_op fp = f_plus(u, rep, prm, pol);
    lblock out;
    out[dynrep::aux_index(0, 0)] = kp1 + fp * ki * ep;
    out[dynrep::aux_index(0, 1)] = fp * ki;
    out[dynrep::aux_index(1, 0)] = ki * ep;
    out[dynrep::aux_index(1, 1)] = ki;
    return out;
}

lblock gauge_normalize(const lblock& raw, int l, const elliptic_params& prm, const truncation_policy& pol) {
    const std::vector<int> w = dynrep::weights(l);
    const int d = l + 1;
    const cplx p = prm.p();
    const cplx r = prm.r();
    const cplx cl = prm.qpow(double(l * (l + 2)) / (4.0 * r));
    auto rho = [&](int mu) {
        const double e = ((mu - 1.0) * (mu - 1.0) - (l - mu + 2.0) * (l - mu + 2.0) / 4.0);
        return -poch1(p, p, pol.order) / poch1(p * prm.qpow(2.0), p, pol.order) * prm.qpow(e / r) *
               poch1(p * prm.qpow(double(-l - mu)), p, pol.order) / poch1(p * prm.qpow(double(mu - l - 2)), p, pol.order);
    };
    std::vector<cplx> gam(d, 1.0);
    for (int m = 0; m + 1 < d; ++m) gam[m + 1] = gam[m] * cl * rho(w[m]);
    const cplx d1[2] = {1.0 / cl, 1.0};
    const cplx d2[2] = {1.0, cl};
    lblock out;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const dyn_op op = raw[dynrep::aux_index(a, b)];
            const double n = op.charge();
            const cplx scale = 1.0 / (d1[a] * d2[b]);
            out[dynrep::aux_index(a, b)] = dyn_op(d, d, op.alpha(), op.beta(), [=](cplx P) -> cmat {
                cmat m = op(P);
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j) {
                        if (m(i, j) == cplx(0)) continue;
                        const cplx gl = prm.qpow(P * double(w[i] * w[i]) / (4.0 * r)) / gam[i];
                        const cplx gr = gam[j] / prm.qpow((P + n) * double(w[j] * w[j]) / (4.0 * r));
                        m(i, j) *= gl * gr * scale;
                    }
                return m;
            });
        }
    return out;
}

namespace {

lblock l_closed(cplx u, const eval_rep& rep, const elliptic_params& prm, const truncation_policy& pol) {
    const int l = rep.l, d = rep.dim();
    const std::vector<int> w = rep.weights();
    const cplx x = u - rep.v;
    const cplx ph = rmatrix::phi_l(l, x, prm, pol);
    if (std::abs(ph) < pol.pole_tol) throw pole_proximity("L: phi_l near zero");
    const int n = pol.order;
    auto B = [prm, n](cplx z) { return br(z, prm, n); };
    auto check = [&pol](cplx v) {
        if (std::abs(v) < pol.pole_tol) throw pole_proximity("L: bracket denominator near zero");
        return v;
    };
    lblock out;
    out[dynrep::aux_index(0, 0)] = dyn_op(d, d, -1, -1, [=](cplx P) -> cmat {
        cmat m = cmat::Zero(d, d);
        for (int k = 0; k < d; ++k) {
            const double h = w[k];
            m(k, k) = -B(x + (h + 1) / 2) * B(P - (l - h) / 2) * B(P + (l + h + 2) / 2) /
                      check(ph * B(P) * B(P + h + 1.0));
        }
        return m;
    });
    out[dynrep::aux_index(0, 1)] = dyn_op(d, d, -1, 1, [=](cplx P) -> cmat {
        cmat m = cmat::Zero(d, d);
        for (int k = 0; k + 1 < d; ++k) {
            const double h = w[k];
            m(k + 1, k) = -B(x + (h - 1) / 2 + P) * B((l - h + 2) / 2) / check(ph * B(P + h - 1.0));
        }
        return m;
    });
    out[dynrep::aux_index(1, 0)] = dyn_op(d, d, 1, -1, [=](cplx P) -> cmat {
        cmat m = cmat::Zero(d, d);
        for (int k = 1; k < d; ++k) {
            const double h = w[k];
            m(k - 1, k) = B(x - (h + 1) / 2 - P) * B((l + h + 2) / 2) / check(ph * B(P));
        }
        return m;
    });
    out[dynrep::aux_index(1, 1)] = dyn_op(d, d, 1, 1, [=](cplx) -> cmat {
        cmat m = cmat::Zero(d, d);
        for (int k = 0; k < d; ++k) m(k, k) = -B(x - (w[k] - 1) / 2.0) / ph;
        return m;
    });
    return out;
}

}  // namespace

lblock l_operator(cplx u, const eval_rep& rep, l_method method, const elliptic_params& prm,
                  const truncation_policy& pol) {
    if (method == l_method::closed_form) return l_closed(u, rep, prm, pol);
    return gauge_normalize(l_gauss_raw(u, rep, prm, pol), rep.l, prm, pol);
}

double rll_residual_blocks(const lblock& l1, const lblock& l2, const std::vector<int>& w, cplx x, cplx P,
                           const elliptic_params& prm, const truncation_policy& pol) {
    using dynrep::aux_index;
    const int d = int(w.size());
    // left R depends on the output weight, right R on the charge of the product
    std::map<int, cmat> r_left, r_right;
    auto rl = [&](int h) -> const cmat& {
        auto it = r_left.find(h);
        if (it == r_left.end()) it = r_left.emplace(h, rmatrix::r_matrix(x, P + double(h), prm, false, pol).full()).first;
        return it->second;
    };
    auto rr = [&](int n) -> const cmat& {
        auto it = r_right.find(n);
        if (it == r_right.end()) it = r_right.emplace(n, rmatrix::r_matrix(x, P + double(n), prm, true, pol).full()).first;
        return it->second;
    };
    // (L1_{c1b1} L2_{c2b2})(P) and (L2_{a2c2} L1_{a1c1})(P)
    cmat left_prod[2][2][2][2], right_prod[2][2][2][2];
    int right_charge[2][2][2][2];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int m = 0; m < 2; ++m) {
                    left_prod[i][j][k][m] = (l1[aux_index(i, j)] * l2[aux_index(k, m)])(P);
                    const dyn_op pr = l2[aux_index(i, j)] * l1[aux_index(k, m)];
                    right_prod[i][j][k][m] = pr(P);
                    right_charge[i][j][k][m] = pr.charge();
                }
    double res = 0, scale = 0;
    for (int a1 = 0; a1 < 2; ++a1)
        for (int a2 = 0; a2 < 2; ++a2)
            for (int b1 = 0; b1 < 2; ++b1)
                for (int b2 = 0; b2 < 2; ++b2) {
                    cmat lhs = cmat::Zero(d, d), rhs = cmat::Zero(d, d);
                    for (int c1 = 0; c1 < 2; ++c1)
                        for (int c2 = 0; c2 < 2; ++c2) {
                            const cmat& lp = left_prod[c1][b1][c2][b2];
                            for (int i = 0; i < d; ++i) lhs.row(i) += rl(w[i])(a1 * 2 + a2, c1 * 2 + c2) * lp.row(i);
                            rhs += right_prod[a2][c2][a1][c1] *
                                   rr(right_charge[a2][c2][a1][c1])(c1 * 2 + c2, b1 * 2 + b2);
                        }
                    res = std::max(res, dynrep::max_abs(lhs - rhs));
                    scale = std::max(scale, dynrep::max_abs(lhs));
                }
    return res / std::max(scale, 1e-300);
}

double rll_residual(cplx u1, cplx u2, const eval_rep& rep, cplx P, const elliptic_params& prm,
                    const truncation_policy& pol) {
    return rll_residual_blocks(l_closed(u1, rep, prm, pol), l_closed(u2, rep, prm, pol), rep.weights(), u1 - u2, P,
                               prm, pol);
}

double rll_residual(cplx u1, cplx u2, const eval_rep& rep1, const eval_rep& rep2, cplx P,
                    const elliptic_params& prm, const truncation_policy& pol) {
    const std::vector<int> wb = rep2.weights();
    const lblock c1 = dynrep::coproduct(l_closed(u1, rep1, prm, pol), l_closed(u1, rep2, prm, pol), wb);
    const lblock c2 = dynrep::coproduct(l_closed(u2, rep1, prm, pol), l_closed(u2, rep2, prm, pol), wb);
    return rll_residual_blocks(c1, c2, dynrep::tensor_weights(rep1.weights(), wb), u1 - u2, P, prm, pol);
}

double closed_vs_gauss(cplx u, const eval_rep& rep, cplx P, const elliptic_params& prm, const truncation_policy& pol) {
    const lblock a = l_operator(u, rep, l_method::closed_form, prm, pol);
    const lblock b = l_operator(u, rep, l_method::gauss, prm, pol);
    double worst = 0;
    for (int i = 0; i < 4; ++i) {
        if (a[i].charge() != b[i].charge() || a[i].alpha() != b[i].alpha()) return 1.0 / 0.0;
        const cmat ma = a[i](P);
        worst = std::max(worst, dynrep::max_abs(ma - b[i](P)) / std::max(1e-300, dynrep::max_abs(ma)));
    }
    return worst;
}

double l_vs_fused(cplx u, const eval_rep& rep, cplx P, const elliptic_params& prm, const truncation_policy& pol) {
    const lblock a = l_closed(u, rep, prm, pol);
    const int d = rep.dim();
    cmat full(2 * d, 2 * d);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) full.block(i * d, j * d, d, d) = a[dynrep::aux_index(i, j)](P);
    const cmat fused = prm.qpow(rep.l / 2.0) * rmatrix::fuse_r(rep.l, u - rep.v, P, prm, pol).full();
    return dynrep::rel_diff(full, fused);
}

double bigrading_residual(cplx u, const eval_rep& rep, cplx P, const elliptic_params& prm,
                          const truncation_policy& pol) {
    const lblock a = l_closed(u, rep, prm, pol);
    const std::vector<int> w = rep.weights();
    const int n = pol.order;
    double worst = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const int e1 = dynrep::aux_sign(i);
            const dyn_op& x = a[dynrep::aux_index(i, j)];
            const dyn_op f = dynrep::diag_fn([prm, n](cplx s, int h) { return br(s + double(h), prm, n); }, w);
            const dyn_op g =
                dynrep::diag_fn([prm, n, e1](cplx s, int h) { return br(s + double(h - e1), prm, n); }, w);
            worst = std::max(worst, dynrep::rel_diff((f * x)(P), (x * g)(P)));
        }
    return worst;
}

}  // namespace ellq::evalrep
