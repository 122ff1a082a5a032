#include "ellq/qseries.hpp"

#include <algorithm>

namespace ellq::qseries {

namespace {

theta_value finish(cplx lo, cplx hi, double tol) {
    theta_value t;
    t.value = hi;
    t.est_error = std::abs(hi - lo) / std::max(1e-300, std::abs(hi));
    if (hi == cplx(0)) t.est_error = std::abs(lo);
    t.converged = t.est_error <= tol;
    return t;
}

}  // namespace

theta_value pochhammer_multi_checked(cplx z, const std::vector<cplx>& moduli, const truncation_policy& pol) {
    return finish(pochhammer_multi(z, moduli, pol.order), pochhammer_multi(z, moduli, pol.order + 10), pol.tol);
}

theta_value theta_checked(cplx z, cplx p, const truncation_policy& pol) {
    return finish(theta(z, p, pol.order), theta(z, p, pol.order + 10), pol.tol);
}

cplx bracket(cplx u, const elliptic_params& prm, bool starred, int order) {
    return starred ? qseries::bracket(u, prm.starred(), order) : qseries::bracket(u, prm, order);
}

theta_value bracket_checked(cplx u, const elliptic_params& prm, bool starred, const truncation_policy& pol) {
    return finish(bracket(u, prm, starred, pol.order), bracket(u, prm, starred, pol.order + 10), pol.tol);
}

cplx modular_tau(const elliptic_params& prm) { return modular_tau_t(prm); }

double quasi_period_r_residual(cplx u, const elliptic_params& prm, int order) {
    return quasi_period_r_residual_t(u, prm, order);
}

double quasi_period_tau_residual(cplx u, const elliptic_params& prm, int order) {
    return quasi_period_tau_residual_t(u, prm, order, false);
}

double quasi_period_tau_corrected_residual(cplx u, const elliptic_params& prm, int order) {
    return quasi_period_tau_residual_t(u, prm, order, true);
}

double oddness_residual(cplx u, const elliptic_params& prm, int order) { return oddness_residual_t(u, prm, order); }

}  // namespace ellq::qseries
