#include <doctest.h>

#include "ellq/dynrep.hpp"
#include "oracles.hpp"

using namespace ellq;
using namespace ellq::dynrep;

namespace {

// random graded operator with P-dependent entries
dyn_op graded(int d, int alpha, int beta, double seed) {
    return dyn_op(d, d, alpha, beta, [d, seed](cplx P) -> cmat {
        cmat m(d, d);
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k) m(i, k) = std::sin(seed * (i + 1) + P * double(k + 1)) + cplx(0, seed * i);
        return m;
    });
}

}  // namespace

TEST_CASE("shift moves functions of P") {
    auto f = [](cplx P) { return std::exp(0.3 * P) + P * P; };
    const cplx P(0.37, 0.21);
    // e^{Q} f(P) = f(P + 1) e^{Q}
    const cmat lhs = (dyn_op::shift(2, 1) * moment_right(f, 2))(P);
    const cmat rhs = (moment_right([&](cplx x) { return f(x + 1.0); }, 2) * dyn_op::shift(2, 1))(P);
    CHECK(rel_diff(lhs, rhs) < 1e-15);
    CHECK(dyn_op::shift(2, 3).charge() == 3);
}

TEST_CASE("identity and associativity") {
    const dyn_op a = graded(3, 1, -1, 0.3), b = graded(3, 0, 2, 0.7), c = graded(3, -2, 1, 1.1);
    const cplx P(0.21, -0.4);
    CHECK(rel_diff((a * dyn_op::identity(3))(P), a(P)) == 0.0);
    CHECK(rel_diff(((a * b) * c)(P), (a * (b * c))(P)) < 1e-14);
    CHECK((a * b).alpha() == 1);
    CHECK((a * b).beta() == 1);
    CHECK_THROWS_AS(a + b, dim_mismatch);
    CHECK_THROWS_AS(a * graded(2, 0, 0, 0.1), dim_mismatch);
}

TEST_CASE("moment maps") {
    const std::vector<int> w{1, -1};
    auto one = [](cplx) { return cplx(1); };
    const cplx P(0.5, 0.1);
    CHECK(rel_diff(moment_left(one, w)(P), cmat::Identity(2, 2)) == 0.0);
    CHECK(rel_diff(moment_right(one, 2)(P), cmat::Identity(2, 2)) == 0.0);
    const cmat m = moment_left([](cplx x) { return x; }, w)(P);
    CHECK(std::abs(m(0, 0) - (P + 1.0)) < 1e-15);
    CHECK(std::abs(m(1, 1) - (P - 1.0)) < 1e-15);
}

TEST_CASE("tensor product") {
    const std::vector<int> w1 = weights(1), w2 = weights(2);
    CHECK(w2 == std::vector<int>{2, 0, -2});
    const cplx P(0.3, 0.2);
    CHECK(rel_diff(tensor(dyn_op::identity(2), dyn_op::identity(3), w2)(P), cmat::Identity(6, 6)) == 0.0);
    const auto tw = tensor_weights(w1, w2);
    CHECK(tw == std::vector<int>{3, 1, -1, 1, -1, -3});
    // A(P + mu_k') B(P)
    const dyn_op a = graded(2, 0, 1, 0.4), b = graded(3, 1, 1, 0.9);
    const cmat t = tensor(a, b, w2)(P);
    const cmat am = a(P + 2.0), bm = b(P);
    CHECK(std::abs(t(0 * 3 + 0, 1 * 3 + 2) - am(0, 1) * bm(0, 2)) < 1e-15);
    CHECK_THROWS_AS(tensor(a, graded(3, 0, 0, 0.1), w2), dim_mismatch);
}

TEST_CASE("grading and conjugation") {
    const std::vector<int> w{1, -1};
    // off-diagonal raising operator of degree (2, 0)
    const dyn_op x(2, 2, 2, 0, [](cplx) {
        cmat m = cmat::Zero(2, 2);
        m(0, 1) = 1.0;
        return m;
    });
    CHECK(grading_violation(x, w, w, 0.3) == 0.0);
    const dyn_op bad(2, 2, 2, 0, [](cplx) { return cmat::Identity(2, 2); });
    CHECK(grading_violation(bad, w, w, 0.3) == 1.0);
    const auto prm = oracle::default_params();
    CHECK(conjugation_residual(graded(2, 0, 1, 0.5), prm, cplx(0.2, 0.1)) < 1e-14);
}
