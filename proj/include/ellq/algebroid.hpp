#pragma once

#include "ellq/dynrep.hpp"
#include "ellq/evalrep.hpp"

namespace ellq::algebroid {

using dynrep::cmat;
using dynrep::dyn_op;
using dynrep::lblock;
using evalrep::eval_rep;

// sum_e L^A_{e1 e}(u) (x) L^B_{e e2}(u) on V_A (x) V_B; signs e1, e2 in {+1, -1}
dyn_op coproduct_realized(int e1, int e2, cplx u, const eval_rep& a, const eval_rep& b, const elliptic_params& prm,
                          const truncation_policy& pol);

// (Delta (x) id) Delta vs (id (x) Delta) Delta on V_A (x) V_B (x) V_C, all four entries
double coassociativity(cplx u, const eval_rep& a, const eval_rep& b, const eval_rep& c, cplx P,
                       const elliptic_params& prm, const truncation_policy& pol);

// epsilon(L_{e1e2}) = delta_{e1e2} e^{e2 Q} on the 1-dim trivial module
dyn_op counit(int e1, int e2);

// max of |(eps (x) id) Delta(x) - x| and |(id (x) eps) Delta(x) - x| for x = L_{e1e2}
double counit_check(int e1, int e2, cplx u, const eval_rep& rep, cplx P, const elliptic_params& prm,
                    const truncation_policy& pol);

// S(L_{e1e2}(u)) realized on rep, built from L(u - 1) and left bracket-ratio prefactors
lblock antipode(cplx u, const eval_rep& rep, const elliptic_params& prm, const truncation_policy& pol);

struct antipode_residuals {
    double left = 0;   // sum_e L_{e1e} S(L_{ee2}) - delta
    double right = 0;  // sum_e S(L_{e1e}) L_{ee2} - delta
};
antipode_residuals antipode_check(cplx u, const eval_rep& rep, cplx P, const elliptic_params& prm,
                                  const truncation_policy& pol);

// RLL for S(L): sum R*(x, P) S2 S1 = sum S1 S2 R(x, P + n + h), h the input weight
double antipode_rll_residual(cplx u1, cplx u2, const eval_rep& rep, cplx P, const elliptic_params& prm,
                             const truncation_policy& pol);

// RLL with coproduct images on rep1 (x) rep2
double coproduct_rll_residual(cplx u1, cplx u2, const eval_rep& rep1, const eval_rep& rep2, cplx P,
                              const elliptic_params& prm, const truncation_policy& pol);

// Compatibility of the type I and type II linear systems for vertex operators with
// V^{(n)} components. Applying either system twice and reordering with RLL leaves a
// dynamical YBE with (R_11, R_1n, R_1n) at (v1 - v2, v1 - u, v2 - u); type II carries
// the argument shifted by the weights of the spaces it acts on.
struct intertwiner_residuals {
    double type1 = 0;
    double type2 = 0;
};
intertwiner_residuals intertwiner_consistency(int n, cplx v1, cplx v2, cplx u, cplx s, const elliptic_params& prm,
                                              const truncation_policy& pol);

}  // namespace ellq::algebroid
