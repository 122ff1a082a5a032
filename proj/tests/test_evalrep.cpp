#include <doctest.h>

#include "ellq/evalrep.hpp"
#include "ellq/qseries.hpp"
#include "ellq/rmatrix.hpp"
#include "oracles.hpp"

using namespace ellq;
using namespace ellq::evalrep;

namespace {
truncation_policy pol;
const elliptic_params prm0({0.35, 0.05}, {2.3, 0.15}, 0.0);
}  // namespace

TEST_CASE("generator parsing") {
    CHECK(parse_generator("x_plus") == generator::x_plus);
    CHECK(parse_generator("h") == generator::h);
    CHECK_THROWS_AS(parse_generator("y7"), bad_generator);
    CHECK_THROWS_AS(pi_drinfeld(generator::a_n, 0, eval_rep{1, 0.1}, prm0), bad_generator);
}

TEST_CASE("Drinfeld images") {
    const eval_rep rep{2, cplx(0.1, 0.05)};
    const cmat h = pi_drinfeld(generator::h, 0, rep, prm0).op(0.3);
    for (int m = 0; m <= 2; ++m) CHECK(h(m, m) == cplx(2 - 2 * m));
    CHECK(pi_drinfeld(generator::c, 0, rep, prm0).op(0.3).isZero());
    CHECK(pi_drinfeld(generator::d, 0, rep, prm0).op(0.3).isZero());

    // raising by 2 and [x+, x-] = [h] at the level of delta-stripped coefficients
    for (int l : {1, 2, 3}) {
        const eval_rep r{l, cplx(0.2, 0.1)};
        const auto xp = pi_drinfeld(generator::x_plus, 0, r, prm0);
        const auto xm = pi_drinfeld(generator::x_minus, 0, r, prm0);
        CHECK(xp.localized);
        CHECK(xp.op.alpha() == 2);
        CHECK(dynrep::grading_violation(xp.op, r.weights(), r.weights(), 0.1) == 0.0);
        const cmat e = xp.op(0.0), f = xm.op(0.0);
        const cmat comm = e * f - f * e;
        for (int m = 0; m <= l; ++m) {
            const cplx want = qseries::qnumber(cplx(l - 2 * m), prm0);
            CHECK(std::abs(comm(m, m) - want) < 1e-13);
        }
        // delta support u' = v + (mu + 1)/2
        CHECK(std::abs(xp.delta.support[0] - (r.v + (l + 1) / 2.0)) < 1e-15);
    }

    // a_1 on v_m from the closed formula; a_n images commute (c = 0)
    const eval_rep r{1, cplx(0.15, 0.07)};
    const cmat a1 = pi_drinfeld(generator::a_n, 1, r, prm0).op(0.0);
    const cmat am1 = pi_drinfeld(generator::a_n, -1, r, prm0).op(0.0);
    const cplx q = prm0.q(), w = r.w(prm0);
    const cplx want0 = w / (q - 1.0 / q) * ((q + 1.0 / q) * q - (q * q + 1.0 / (q * q)));
    CHECK(std::abs(a1(0, 0) - want0) < 1e-14);
    CHECK((a1 * am1 - am1 * a1).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("closed form vs Gauss product") {
    for (int l : {1, 2}) {
        const eval_rep rep{l, cplx(0.13, 0.09)};
        CHECK(closed_vs_gauss(cplx(0.41, 0.16), rep, cplx(0.27, 0.22), prm0, pol) < 1e-9);
    }
}

TEST_CASE("L for l = 1 equals q^{1/2} R") {
    const eval_rep rep{1, cplx(0.1, 0.05)};
    const cplx u(0.37, 0.14), P(0.52, 0.11);
    const auto L = l_operator(u, rep, l_method::closed_form, prm0, pol);
    const cmat R = rmatrix::r_matrix(u - rep.v, P, prm0, false, pol).full() * prm0.qpow(0.5);
    // (L_{e1 e2})_{mu' mu} = R_{(e1 mu'),(e2 mu)}
    double worst = 0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const cmat m = L[dynrep::aux_index(a, b)](P);
            for (int i = 0; i < 2; ++i)
                for (int k = 0; k < 2; ++k) worst = std::max(worst, std::abs(m(i, k) - R(a * 2 + i, b * 2 + k)));
        }
    CHECK(worst < 1e-12);
    CHECK(l_vs_fused(u, eval_rep{3, cplx(0.2, 0.1)}, P, prm0, pol) < 1e-8);
}

TEST_CASE("RLL") {
    const cplx u1(0.31, 0.12), u2(-0.17, 0.2), P(0.41, 0.17);
    for (int l : {1, 2}) CHECK(rll_residual(u1, u2, eval_rep{l, cplx(0.05, 0.03)}, P, prm0, pol) < 1e-9);
    CHECK(rll_residual(u1, u2, eval_rep{1, cplx(0.05, 0.03)}, eval_rep{2, cplx(-0.2, 0.1)}, P, prm0, pol) < 1e-9);
    // u1 = u2 only probes R-conjugation consistency
    CHECK(rll_residual(u1, u1, eval_rep{2, cplx(0.05, 0.03)}, P, prm0, pol) < 1e-9);
}

TEST_CASE("bigrading") {
    for (int l : {1, 2}) CHECK(bigrading_residual(cplx(0.3, 0.1), eval_rep{l, 0.1}, cplx(0.4, 0.2), prm0, pol) < 1e-12);
}

TEST_CASE("half currents") {
    const eval_rep rep{1, cplx(0.1, 0.05)};
    const auto e = half_current(half_kind::Eplus, cplx(0.3, 0.1), rep, prm0, pol);
    const auto f = half_current(half_kind::Fplus, cplx(0.3, 0.1), rep, prm0, pol);
    // E+ lowers, F+ raises the auxiliary P + h grading
    CHECK(e.alpha() == 0);
    CHECK(e.beta() == -2);
    CHECK(f.alpha() == -2);
    CHECK(f.beta() == 0);
}
