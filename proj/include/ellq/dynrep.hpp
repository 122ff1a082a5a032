#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <vector>

#include "ellq/params.hpp"

namespace ellq::dynrep {

using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;

// weights mu_m = l - 2m, m = 0..l
std::vector<int> weights(int l);

// M(P) e^{nQ} on a finite weight module. e^{nQ} g(P) = g(P+n) e^{nQ},
// so products evaluate the right factor at P + n_left.
// Bigrading (alpha, beta) in units of Q; the Q charge is -beta.
class dyn_op {
public:
    using entry_fn = std::function<cmat(cplx)>;

    dyn_op() = default;
    dyn_op(int rows, int cols, int alpha, int beta, entry_fn f);

    static dyn_op identity(int dim);
    static dyn_op shift(int dim, int n);  // e^{nQ}
    static dyn_op zero(int rows, int cols, int alpha, int beta);

    cmat operator()(cplx P) const { return f_(P); }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int alpha() const { return alpha_; }
    int beta() const { return beta_; }
    int charge() const { return -beta_; }

    // (X g)(P) = M(P) g(P + n) for a vector valued test function g
    cvec apply(const std::function<cvec(cplx)>& g, cplx P) const;

    dyn_op scaled(cplx s) const;

    friend dyn_op operator*(const dyn_op& a, const dyn_op& b);
    friend dyn_op operator+(const dyn_op& a, const dyn_op& b);
    friend dyn_op operator-(const dyn_op& a, const dyn_op& b);

private:
    int rows_ = 0, cols_ = 0;
    int alpha_ = 0, beta_ = 0;
    entry_fn f_;
};

// diag f(P + mu) on weight mu vectors
dyn_op moment_left(const std::function<cplx(cplx)>& f, const std::vector<int>& wts);
// diag f*(P); f_star is f with r -> r*, passed in by the caller
dyn_op moment_right(const std::function<cplx(cplx)>& f_star, int dim);
// diag g(P, mu); used for bracket-ratio prefactors
dyn_op diag_fn(const std::function<cplx(cplx, int)>& g, const std::vector<int>& wts);

// (A (x) B)_{(m'k'),(mk)}(P) = A_{m'm}(P + mu_{k'}) B_{k'k}(P).
// Requires beta(A) == alpha(B); the result has grading (alpha(A), beta(B)).
dyn_op tensor(const dyn_op& a, const dyn_op& b, const std::vector<int>& wb);
std::vector<int> tensor_weights(const std::vector<int>& wa, const std::vector<int>& wb);

// max over entries of |M_{m'm}| where mu_{m'} - mu_m != alpha - beta
double grading_violation(const dyn_op& x, const std::vector<int>& w_out, const std::vector<int>& w_in, cplx P);

// |q^P X q^{-P} g - q^{<beta,P>} X g| at P for a test function g
double conjugation_residual(const dyn_op& x, const elliptic_params& prm, cplx P);

// 2x2 auxiliary block of operators, index a*2 + b with 0 = "+", 1 = "-"
using lblock = std::array<dyn_op, 4>;
inline int aux_index(int a, int b) { return a * 2 + b; }
inline int aux_sign(int a) { return a == 0 ? 1 : -1; }

// Delta(L_{ab}) = sum_c L^A_{ac} (x) L^B_{cb}
lblock coproduct(const lblock& la, const lblock& lb, const std::vector<int>& wb);

// Restrict an l-fold chain on (C^2)^{(x) l} to the span of the lowered
// highest vectors e_k(P) = T_{+-}(P) e_{k-1}(P-1), each normalized to 1 on the
// basis vector with k minuses followed by pluses. Throws fusion_degenerate if
// an image leaves the span by more than tol.
lblock fuse_restrict(const lblock& chain, int l, double tol = 1e-9);

double max_abs(const cmat& m);
double rel_diff(const cmat& a, const cmat& b);

}  // namespace ellq::dynrep
