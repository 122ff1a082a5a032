#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ellq/params.hpp"

namespace ellq::freefield {

// [alpha_m, alpha_n] = [2m][km]/m [rm]/[r*m] delta_{m+n,0}, k = params.c()
cplx alpha_commutator(int m, int n, const elliptic_params& prm);
// alpha -> a, a-commutator [a_n, a_m] = [2n][cn]/n q^{-c|n|}, back to alpha
cplx alpha_commutator_via_a(int m, int n, const elliptic_params& prm);
// alpha_m = t_m a_m
cplx alpha_from_a(int m, const elliptic_params& prm);

// One summand w q^{e n} / prod_b (1 - q^{b n}) of a log-coefficient; resums to (q^e y; q^{b..})^{-w}.
struct kernel_term {
    cplx w;
    cplx e;
    std::vector<cplx> bases;
};

// const * q^{shift n} * prod_x [x n]^{m_x} * prod_j (sum_i w_ij q^{e_ij n}), all exponents in units of log q
class qmono {
public:
    qmono() = default;
    static qmono qnum(cplx x, int m = 1);
    static qmono sum(std::vector<std::pair<cplx, cplx>> we);
    static qmono constant(cplx c);

    qmono operator*(const qmono& o) const;
    qmono scaled(cplx s) const;

    cplx eval(int n, const elliptic_params& prm) const;
    std::vector<kernel_term> terms(const elliptic_params& prm) const;

private:
    cplx cst_{1.0, 0.0};
    cplx shift_{0.0, 0.0};
    std::vector<std::pair<cplx, int>> qn_;
    std::vector<std::vector<std::pair<cplx, cplx>>> sums_;
};

cplx term_sum(const std::vector<kernel_term>& t, int n, const elliptic_params& prm);

// a0 + aP P + ah h
struct lin {
    cplx c0{0.0, 0.0}, cP{0.0, 0.0}, ch{0.0, 0.0};
    cplx at(cplx P, cplx h) const { return c0 + cP * P + ch * h; }
};

enum class spec_source { derived, display };

// :exp(sum_n c_n alpha_{-n} z^n + d_n alpha_n z^{-n}): e^{nQ Q + na alpha_1} z^{f(P,h)} e^{g(P,h)}
// f = f_drinfeld + f_dyn, f_dyn being the P-dependent part from the dressing of the currents.
struct vertex_spec {
    std::string name;
    qmono c, d;
    std::function<cplx(int)> c_raw, d_raw;
    int nQ = 0, nalpha = 0;
    lin f_drinfeld, f_dyn, g;
    lin f() const { return {f_drinfeld.c0 + f_dyn.c0, f_drinfeld.cP + f_dyn.cP, f_drinfeld.ch + f_dyn.ch}; }
};

// name in {K, E, F, Hplus, Hminus}; k = params.c()
vertex_spec make_spec(const std::string& name, const elliptic_params& prm, spec_source src = spec_source::derived);

// log-kernel of A(z) B(w): exp(sum_n d^A_n c^B_n [alpha_n, alpha_{-n}] y^n), y = w/z
struct contraction {
    std::vector<cplx> log_coeff;  // index n = 0..N, [0] = 0
    std::vector<cplx> coeff;      // power series of the kernel itself
    std::vector<kernel_term> terms;
    cplx zero_exponent_z{0.0, 0.0};  // zero-mode exchange factor z^{.} w^{.} e^{.} of A(z)B(w) vs B(w)A(z)
    cplx zero_exponent_w{0.0, 0.0};
    cplx zero_constant{0.0, 0.0};
};
contraction contraction_kernel(const vertex_spec& a, const vertex_spec& b, int order, const elliptic_params& prm);

// resummed kernel at y; AnnulusViolation if a product factor is within tol of zero
cplx kernel_value(const std::vector<kernel_term>& terms, cplx y, const elliptic_params& prm, int order,
                  double pole_tol);

enum class pair_kind { EE, FF, KK, KE, KF, HpHm, HH_same };
pair_kind parse_pair(const std::string& s);
std::string pair_name(pair_kind p);

struct exchange_result {
    cplx ratio;
    cplx rhs;
    double coeff_dev = 0;   // factored vs raw log-coefficients, n <= N
    double value_dev = 0;   // |ratio/rhs - 1|
    double deviation = 0;   // max of the two
};
exchange_result exchange_ratio_check(pair_kind pair, cplx u, cplx v, const elliptic_params& prm,
                                     const truncation_policy& pol);

struct ef_report {
    bool degenerate = false;
    std::vector<cplx> pole_exponents;  // e with a simple pole at z = q^e w
    bool poles_ok = false;
    double residue_dev_plus = 0;   // z = q^c w vs H+
    double residue_dev_minus = 0;  // z = q^{-c} w vs H-
    cplx kappa_kk{0.0, 0.0};       // kappa * contraction of the two K's inside H
    double kappa_kk_dev = 0;
};
ef_report ef_pole_structure(const elliptic_params& prm, int order, const truncation_policy& pol);

// [d-hat, X] = (-z d/dz + const) X: induced constant from the P,h quadratic terms vs the stated one
struct grading_result {
    cplx induced{0.0, 0.0};
    cplx stated{0.0, 0.0};
    double p_dependence = 0;  // should vanish: P,h terms cancel against z^{f_dyn}
    double deviation = 0;
};
grading_result grading_check(const std::string& name, const elliptic_params& prm);

// [X, P] = a X, [X, P + h] = b X
struct charge_pair {
    int p = 0, p_plus_h = 0;
};
charge_pair charges(const vertex_spec& s);

// phi_r-dressed Drinfeld currents vs display E/F coefficients, max relative deviation n <= N
double dressing_deviation(const std::string& name, const elliptic_params& prm, int order);

// display vs derived spec: nonzero-mode coefficients and zero-mode exponent
struct display_result {
    double coeff_dev = 0;
    double zero_mode_dev = 0;
};
display_result display_consistency(const std::string& name, const elliptic_params& prm, int order);

}  // namespace ellq::freefield
