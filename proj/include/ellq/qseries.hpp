#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "ellq/params.hpp"

namespace ellq::qseries {

struct theta_value {
    cplx value;
    bool converged = false;
    double est_error = 0.0;
};

namespace detail {

// Sum of log(1 - z * prod b_i^{n_i}) over total degree <= left.
template <class C>
void accumulate_log(C z, const std::vector<C>& bases, std::size_t i, int left, C& acc, bool& hit_zero) {
    if (i == bases.size()) {
        C f = C(1) - z;
        if (f == C(0)) {
            hit_zero = true;
            return;
        }
        acc += std::log(f);
        return;
    }
    C zz = z;
    for (int n = 0; n <= left; ++n) {
        accumulate_log(zz, bases, i + 1, left - n, acc, hit_zero);
        if (hit_zero) return;
        zz *= bases[i];
        if (zz == C(0)) break;
    }
}

}  // namespace detail

// prod_{n=0}^{order} (1 - z b^n)
template <class C>
C q_pochhammer(C z, C base, int order) {
    C v(1);
    C t = z;
    for (int n = 0; n <= order; ++n) {
        v *= C(1) - t;
        t *= base;
    }
    return v;
}

// prod over n_1+...+n_m <= order of (1 - z b_1^{n_1}...b_m^{n_m}),
// accumulated in logs and exponentiated once.
template <class C>
C pochhammer_multi(C z, const std::vector<C>& bases, int order) {
    for (const auto& b : bases)
        if (std::abs(b) >= 1) throw non_convergent("pochhammer_multi: |modulus| >= 1");
    if (z == C(0)) return C(1);
    C acc(0);
    bool zero = false;
    detail::accumulate_log(z, bases, 0, order, acc, zero);
    if (zero) return C(0);
    if (!std::isfinite(acc.real())) throw non_convergent("pochhammer_multi: overflow in log-product");
    return std::exp(acc);
}

// Theta_p(z) = (z;p)(p/z;p)(p;p)
template <class C>
C theta(C z, C p, int order) {
    if (z == C(0)) throw domain_error("theta: z = 0");
    return q_pochhammer(z, p, order) * q_pochhammer(p / z, p, order) * q_pochhammer(p, p, order);
}

// Jacobi triple product summation, sum_{|n|<=M} (-1)^n p^{n(n-1)/2} z^n
template <class C>
C theta_series(C z, C p, int terms) {
    C s(0);
    for (int n = -terms; n <= terms; ++n) {
        using R = typename C::value_type;
        R e = R(n) * R(n - 1) / R(2);
        C t = std::pow(p, e) * std::pow(z, R(n));
        s += (n % 2 == 0) ? t : -t;
    }
    return s;
}

// [u] = q^{u^2/r - u} Theta_p(q^{2u}) / (p;p)^3, with r, p taken from prm.
// Callers pass prm.starred() for [u]*.
template <class T>
std::complex<T> bracket(std::complex<T> u, const basic_params<T>& prm, int order) {
    using C = std::complex<T>;
    const C p = prm.p();
    const C pp = q_pochhammer(p, p, order);
    const C z = prm.qpow(T(2) * u);
    return prm.qpow(u * u / prm.r() - u) * theta(z, p, order) / (pp * pp * pp);
}

// [x]_q
template <class T>
std::complex<T> qnumber(std::complex<T> x, const basic_params<T>& prm) {
    const auto q = prm.q();
    return (prm.qpow(x) - prm.qpow(-x)) / (q - T(1) / q);
}

// {z} = (z; p, q^4)
template <class T>
std::complex<T> curly(std::complex<T> z, const basic_params<T>& prm, int order) {
    return pochhammer_multi(z, {prm.p(), prm.qpow(std::complex<T>(4))}, order);
}

template <class T>
std::complex<T> modular_tau_t(const basic_params<T>& prm) {
    const std::complex<T> i(0, 1);
    return -std::numbers::pi_v<T> * i / (prm.r() * prm.log_q());
}

template <class T>
T rel_residual(std::complex<T> a, std::complex<T> b) {
    return std::abs(a - b) / std::max(T(1), std::abs(b));
}

// [u + r] = -[u]
template <class T>
T quasi_period_r_residual_t(std::complex<T> u, const basic_params<T>& prm, int order) {
    return rel_residual(bracket(u + prm.r(), prm, order), -bracket(u, prm, order));
}

// literal: [u + r tau] = exp(-pi i (2u/r + tau)) [u]; sign_corrected adds the overall -1
template <class T>
T quasi_period_tau_residual_t(std::complex<T> u, const basic_params<T>& prm, int order, bool sign_corrected) {
    const std::complex<T> i(0, 1);
    const auto tau = modular_tau_t(prm);
    const auto lhs = bracket(u + prm.r() * tau, prm, order);
    auto rhs = std::exp(-std::numbers::pi_v<T> * i * (T(2) * u / prm.r() + tau)) * bracket(u, prm, order);
    if (sign_corrected) rhs = -rhs;
    return rel_residual(lhs, rhs);
}

template <class T>
T oddness_residual_t(std::complex<T> u, const basic_params<T>& prm, int order) {
    return rel_residual(bracket(-u, prm, order), -bracket(u, prm, order));
}

// product form vs triple-product summation of Theta_p(z)
template <class T>
T triple_product_residual_t(std::complex<T> z, const basic_params<T>& prm, int order, int terms) {
    const auto p = prm.p();
    return rel_residual(theta(z, p, order), theta_series(z, p, terms));
}

theta_value pochhammer_multi_checked(cplx z, const std::vector<cplx>& moduli, const truncation_policy& pol);
theta_value theta_checked(cplx z, cplx p, const truncation_policy& pol);
theta_value bracket_checked(cplx u, const elliptic_params& prm, bool starred, const truncation_policy& pol);

cplx bracket(cplx u, const elliptic_params& prm, bool starred, int order);

// tau with p = exp(-2 pi i / tau)
cplx modular_tau(const elliptic_params& prm);

// residuals of the quasi-periodicity laws, normalized by max(1, |[u]|)
double quasi_period_r_residual(cplx u, const elliptic_params& prm, int order);
double quasi_period_tau_residual(cplx u, const elliptic_params& prm, int order);
double quasi_period_tau_corrected_residual(cplx u, const elliptic_params& prm, int order);
double oddness_residual(cplx u, const elliptic_params& prm, int order);

}  // namespace ellq::qseries
