#pragma once

#include <string>
#include <vector>

#include "ellq/dynrep.hpp"
#include "ellq/params.hpp"

namespace ellq::evalrep {

using dynrep::cmat;
using dynrep::dyn_op;
using dynrep::lblock;

// V^{(l)} at the evaluation point w = q^{2v}
struct eval_rep {
    int l = 1;
    cplx v{0.0, 0.0};

    int dim() const { return l + 1; }
    std::vector<int> weights() const { return dynrep::weights(l); }
    cplx w(const elliptic_params& prm) const { return prm.qpow(2.0 * v); }
};

enum class generator { a_n, x_plus, x_minus, h, c, d };
generator parse_generator(const std::string& name);

// delta(q^{h +- 1} w / z) kept as data: for input weight mu the integral over z'
// collapses to z' = q^{mu +- 1} w, i.e. u' = v + (mu +- 1)/2.
struct delta_token {
    int sign = 0;
    std::vector<cplx> support;  // u' per input basis vector
};

struct drinfeld_image {
    dyn_op op;  // coefficient matrix (for x^{+-} the part in front of the delta)
    bool localized = false;
    delta_token delta;
};

// n is the mode number for a_n and ignored otherwise
drinfeld_image pi_drinfeld(generator g, int n, const eval_rep& rep, const elliptic_params& prm);

enum class half_kind { Kplus, Eplus, Fplus };

// K(u) eigenvalue on weight mu at c = 0, without the e^Q factor
cplx k_eigen(cplx u, int mu, const eval_rep& rep, const elliptic_params& prm, const truncation_policy& pol);

dyn_op half_current(half_kind kind, cplx u, const eval_rep& rep, const elliptic_params& prm,
                    const truncation_policy& pol);

enum class l_method { closed_form, gauss };

// Gauss product of half currents before the gauge map
lblock l_gauss_raw(cplx u, const eval_rep& rep, const elliptic_params& prm, const truncation_policy& pol);
// conjugation by q^{P h^2/4r} and the weight constants that bring the Gauss product to the closed form
lblock gauge_normalize(const lblock& raw, int l, const elliptic_params& prm, const truncation_policy& pol);

lblock l_operator(cplx u, const eval_rep& rep, l_method method, const elliptic_params& prm,
                  const truncation_policy& pol);

// RLL on the quantum space with weights w:
// sum_c R(x, P + h)_{(a1a2),(c1c2)} L1_{c1b1} L2_{c2b2} vs sum_c L2_{a2c2} L1_{a1c1} R*(x, P + n)_{(c1c2),(b1b2)}
double rll_residual_blocks(const lblock& l1, const lblock& l2, const std::vector<int>& w, cplx x, cplx P,
                           const elliptic_params& prm, const truncation_policy& pol);

// single module
double rll_residual(cplx u1, cplx u2, const eval_rep& rep, cplx P, const elliptic_params& prm,
                    const truncation_policy& pol);
// on rep1 (x) rep2 through the coproduct
double rll_residual(cplx u1, cplx u2, const eval_rep& rep1, const eval_rep& rep2, cplx P,
                    const elliptic_params& prm, const truncation_policy& pol);

// max relative difference of closed-form and gauge-mapped Gauss L at P
double closed_vs_gauss(cplx u, const eval_rep& rep, cplx P, const elliptic_params& prm, const truncation_policy& pol);
// closed-form L entries against q^{l/2} R_{1l}(u - v, P)
double l_vs_fused(cplx u, const eval_rep& rep, cplx P, const elliptic_params& prm, const truncation_policy& pol);
// f(P+h) L_{e1e2} = L_{e1e2} f(P+h-e1) with f = [.]
double bigrading_residual(cplx u, const eval_rep& rep, cplx P, const elliptic_params& prm,
                          const truncation_policy& pol);

}  // namespace ellq::evalrep
