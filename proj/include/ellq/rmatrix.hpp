#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "ellq/params.hpp"
#include "ellq/qseries.hpp"

namespace ellq::rmatrix {

using cmat = Eigen::MatrixXcd;

// Bare matrix and scalar prefactor kept apart; full() multiplies them.
// Basis of C^{d1} (x) C^{d2} is ordered a * d2 + b; for d = 2, index 0 is "+".
struct rmatrix_block {
    cmat bare;
    cplx prefactor{1.0, 0.0};
    cplx s{0.0, 0.0};
    int d1 = 2, d2 = 2;
    cmat full() const { return prefactor * bare; }
};

// rho+(u) = z^{1/2r} {pq^2z}^2/({pz}{pq^4z}) {1/z}{q^4/z}/{q^2/z}^2
template <class T>
std::complex<T> rho_plus_t(std::complex<T> u, const basic_params<T>& prm, int order) {
    using C = std::complex<T>;
    const C z = prm.qpow(T(2) * u);
    const C p = prm.p();
    auto cb = [&](C x) { return qseries::curly(x, prm, order); };
    const C q2 = prm.qpow(C(2)), q4 = prm.qpow(C(4));
    const C a = cb(p * q2 * z);
    const C b = cb(q2 / z);
    return prm.qpow(u / prm.r()) * a * a / (cb(p * z) * cb(p * q4 * z)) * cb(T(1) / z) * cb(q4 / z) / (b * b);
}

cplx rho_plus(cplx u, const elliptic_params& prm, bool starred, const truncation_policy& pol);
// rho(u) = rho+*(u) / rho+(u)
cplx rho(cplx u, const elliptic_params& prm, const truncation_policy& pol);
cplx rho_kl(int k, int l, cplx u, const elliptic_params& prm, const truncation_policy& pol);
// phi_l(x) = -z^{-l/2r} rho+_{1l}(x)^{-1} [x + (l+1)/2]
cplx phi_l(int l, cplx x, const elliptic_params& prm, const truncation_policy& pol);

// b, c, cbar, bbar of the 4x4 matrix
struct weights4 {
    cplx b, c, cbar, bbar;
};
weights4 boltzmann(cplx u, cplx s, const elliptic_params& prm, bool starred, const truncation_policy& pol);

rmatrix_block r_matrix(cplx u, cplx s, const elliptic_params& prm, bool starred, const truncation_policy& pol);

// kappa by removing the common vanishing factor (1 - q^2 z) at z = q^{-2}
cplx kappa(const elliptic_params& prm, const truncation_policy& pol);
// same limit with arbitrary moduli in numerator and denominator
cplx kappa_moduli(cplx p_num, cplx p_den, const elliptic_params& prm, const truncation_policy& pol);
// oracle: raw ratio at z = q^{-2}(1 + eps), Richardson over eps in {1e-3, 1e-4, 1e-5}
cplx kappa_extrapolated(const elliptic_params& prm, const truncation_policy& pol);

// R_{1l}(u, s) on C^2 (x) C^{l+1}; fuse_r(1) is r_matrix
rmatrix_block fuse_r(int l, cplx u, cplx s, const elliptic_params& prm, const truncation_policy& pol);

// R acting on the pair (i, j) of three spaces with dims d, weights w.
// s_of receives the weights of the three factors of the input basis vector.
using block_fn = std::function<cmat(cplx s)>;
cmat embed3(int i, int j, const std::vector<std::vector<int>>& w, const block_fn& blk,
            const std::function<cplx(int, int, int)>& s_of);

double dybe_residual(cplx u1, cplx u2, cplx u3, cplx s, const elliptic_params& prm, bool starred,
                     const truncation_policy& pol);
// (R11, R1l, R1l) with the third space C^{l+1}
double mixed_dybe_residual(int l, cplx u1, cplx u2, cplx u3, cplx s, const elliptic_params& prm,
                           const truncation_policy& pol);

double ice_violation(const rmatrix_block& r);

}  // namespace ellq::rmatrix
