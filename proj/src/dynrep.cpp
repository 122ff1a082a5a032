#include "ellq/dynrep.hpp"

#include <algorithm>
#include <cmath>

namespace ellq::dynrep {

std::vector<int> weights(int l) {
    std::vector<int> w;
    for (int m = 0; m <= l; ++m) w.push_back(l - 2 * m);
    return w;
}

dyn_op::dyn_op(int rows, int cols, int alpha, int beta, entry_fn f)
    : rows_(rows), cols_(cols), alpha_(alpha), beta_(beta), f_(std::move(f)) {}

dyn_op dyn_op::identity(int dim) {
    return dyn_op(dim, dim, 0, 0, [dim](cplx) -> cmat { return cmat::Identity(dim, dim); });
}

dyn_op dyn_op::shift(int dim, int n) {
    return dyn_op(dim, dim, 0, -n, [dim](cplx) -> cmat { return cmat::Identity(dim, dim); });
}

dyn_op dyn_op::zero(int rows, int cols, int alpha, int beta) {
    return dyn_op(rows, cols, alpha, beta, [rows, cols](cplx) -> cmat { return cmat::Zero(rows, cols); });
}

cvec dyn_op::apply(const std::function<cvec(cplx)>& g, cplx P) const {
    return f_(P) * g(P + double(charge()));
}

dyn_op dyn_op::scaled(cplx s) const {
    auto f = f_;
    return dyn_op(rows_, cols_, alpha_, beta_, [f, s](cplx P) -> cmat { return s * f(P); });
}

dyn_op operator*(const dyn_op& a, const dyn_op& b) {
    if (a.cols_ != b.rows_) throw dim_mismatch("dyn_op product: dimension mismatch");
    const double n = a.charge();
    auto fa = a.f_;
    auto fb = b.f_;
    return dyn_op(a.rows_, b.cols_, a.alpha_ + b.alpha_, a.beta_ + b.beta_,
                  [fa, fb, n](cplx P) -> cmat { return fa(P) * fb(P + n); });
}

dyn_op operator+(const dyn_op& a, const dyn_op& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw dim_mismatch("dyn_op sum: dimension mismatch");
    if (a.alpha_ != b.alpha_ || a.beta_ != b.beta_) throw dim_mismatch("dyn_op sum: grading mismatch");
    auto fa = a.f_;
    auto fb = b.f_;
    return dyn_op(a.rows_, a.cols_, a.alpha_, a.beta_, [fa, fb](cplx P) -> cmat { return fa(P) + fb(P); });
}

dyn_op operator-(const dyn_op& a, const dyn_op& b) { return a + b.scaled(-1.0); }

dyn_op moment_left(const std::function<cplx(cplx)>& f, const std::vector<int>& wts) {
    const int d = int(wts.size());
    return dyn_op(d, d, 0, 0, [f, wts, d](cplx P) -> cmat {
        cmat m = cmat::Zero(d, d);
        for (int i = 0; i < d; ++i) m(i, i) = f(P + double(wts[i]));
        return m;
    });
}

dyn_op moment_right(const std::function<cplx(cplx)>& f_star, int dim) {
    return dyn_op(dim, dim, 0, 0, [f_star, dim](cplx P) -> cmat {
        return f_star(P) * cmat::Identity(dim, dim);
    });
}

dyn_op diag_fn(const std::function<cplx(cplx, int)>& g, const std::vector<int>& wts) {
    const int d = int(wts.size());
    return dyn_op(d, d, 0, 0, [g, wts, d](cplx P) -> cmat {
        cmat m = cmat::Zero(d, d);
        for (int i = 0; i < d; ++i) m(i, i) = g(P, wts[i]);
        return m;
    });
}

dyn_op tensor(const dyn_op& a, const dyn_op& b, const std::vector<int>& wb) {
    if (a.beta() != b.alpha()) throw dim_mismatch("tensor: middle gradings differ");
    if (int(wb.size()) != b.rows() || b.rows() != b.cols()) throw dim_mismatch("tensor: weights of B");
    const int ra = a.rows(), ca = a.cols(), db = b.rows();
    return dyn_op(ra * db, ca * db, a.alpha(), b.beta(), [a, b, wb, ra, ca, db](cplx P) -> cmat {
        cmat out = cmat::Zero(ra * db, ca * db);
        const cmat bm = b(P);
        for (int kp = 0; kp < db; ++kp) {
            bool any = false;
            for (int k = 0; k < db; ++k) any = any || bm(kp, k) != cplx(0);
            if (!any) continue;
            const cmat am = a(P + double(wb[kp]));
            for (int k = 0; k < db; ++k) {
                const cplx bv = bm(kp, k);
                if (bv == cplx(0)) continue;
                for (int mp = 0; mp < ra; ++mp)
                    for (int m = 0; m < ca; ++m) out(mp * db + kp, m * db + k) += am(mp, m) * bv;
            }
        }
        return out;
    });
}

std::vector<int> tensor_weights(const std::vector<int>& wa, const std::vector<int>& wb) {
    std::vector<int> w;
    for (int x : wa)
        for (int y : wb) w.push_back(x + y);
    return w;
}

double grading_violation(const dyn_op& x, const std::vector<int>& w_out, const std::vector<int>& w_in, cplx P) {
    const cmat m = x(P);
    double worst = 0;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (w_out[i] - w_in[j] != x.alpha() - x.beta()) worst = std::max(worst, std::abs(m(i, j)));
    return worst;
}

double conjugation_residual(const dyn_op& x, const elliptic_params& prm, cplx P) {
    const int d = x.cols();
    auto g = [d](cplx s) -> cvec {
        cvec v(d);
        for (int i = 0; i < d; ++i) v(i) = std::exp(cplx(0.3 * (i + 1), 0.1) * s) + cplx(i);
        return v;
    };
    auto qg = [&](cplx s) -> cvec { return prm.qpow(-s) * g(s); };
    const cvec lhs = prm.qpow(P) * x.apply(qg, P);
    const cvec rhs = prm.qpow(double(x.beta())) * x.apply(g, P);
    return (lhs - rhs).cwiseAbs().maxCoeff() / std::max(1e-300, rhs.cwiseAbs().maxCoeff());
}

double max_abs(const cmat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

double rel_diff(const cmat& a, const cmat& b) {
    return max_abs(a - b) / std::max(1e-300, std::max(max_abs(a), max_abs(b)));
}

lblock coproduct(const lblock& la, const lblock& lb, const std::vector<int>& wb) {
    lblock out;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            out[aux_index(a, b)] = tensor(la[aux_index(a, 0)], lb[aux_index(0, b)], wb) +
                                   tensor(la[aux_index(a, 1)], lb[aux_index(1, b)], wb);
    return out;
}

namespace {

int ref_index(int l, int k) {
    // k minuses then l - k pluses; "-" is bit 1, most significant factor first
    int idx = 0;
    for (int i = 0; i < l; ++i) idx = idx * 2 + (i < k ? 1 : 0);
    return idx;
}

cvec lowered(const dyn_op& lower, int l, int k, cplx P) {
    const int dim = 1 << l;
    if (k == 0) {
        cvec v = cvec::Zero(dim);
        v(0) = 1.0;
        return v;
    }
    cvec v = lower(P) * lowered(lower, l, k - 1, P - 1.0);
    const cplx ref = v(ref_index(l, k));
    if (std::abs(ref) < 1e-300) throw fusion_degenerate("fusion: lowered vector vanishes on reference path");
    return v / ref;
}

}  // namespace

lblock fuse_restrict(const lblock& chain, int l, double tol) {
    const dyn_op lower = chain[aux_index(0, 1)];
    lblock out;
    for (int idx = 0; idx < 4; ++idx) {
        const dyn_op op = chain[idx];
        const double n = op.charge();
        out[idx] = dyn_op(l + 1, l + 1, op.alpha(), op.beta(), [op, lower, l, n, tol](cplx P) -> cmat {
            const int dim = 1 << l;
            cmat basis(dim, l + 1);
            for (int k = 0; k <= l; ++k) basis.col(k) = lowered(lower, l, k, P);
            const cmat m = op(P);
            cmat y(l + 1, l + 1);
            auto qr = basis.colPivHouseholderQr();
            for (int k = 0; k <= l; ++k) {
                const cvec img = m * lowered(lower, l, k, P + n);
                const cvec coef = qr.solve(img);
                const double miss = (basis * coef - img).cwiseAbs().maxCoeff();
                if (miss > tol * std::max(1.0, img.cwiseAbs().maxCoeff()))
                    throw fusion_degenerate("fusion: image leaves the invariant span");
                y.col(k) = coef;
            }
            // entries outside the grading pattern are zero by construction; drop the rounding
            const std::vector<int> w = weights(l);
            for (int i = 0; i <= l; ++i)
                for (int k = 0; k <= l; ++k)
                    if (w[i] - w[k] != op.alpha() - op.beta()) y(i, k) = 0;
            return y;
        });
    }
    return out;
}

}  // namespace ellq::dynrep
