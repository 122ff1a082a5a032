#include <doctest.h>

#include "ellq/qseries.hpp"
#include "oracles.hpp"

using namespace ellq;
using namespace ellq::qseries;

TEST_CASE("pochhammer trivial values") {
    CHECK(std::abs(q_pochhammer(cplx(0), cplx(0.3, 0.1), 40) - 1.0) == 0.0);
    CHECK(std::abs(pochhammer_multi(cplx(0), {cplx(0.2), cplx(0.1)}, 40) - 1.0) == 0.0);
    const cplx z(0.4, -0.7);
    CHECK(std::abs(pochhammer_multi(z, {cplx(0)}, 40) - (1.0 - z)) < 1e-15);
    CHECK(std::abs(q_pochhammer(z, cplx(0), 40) - (1.0 - z)) < 1e-15);
}

TEST_CASE("pochhammer against higher order evaluation") {
    const cplx z(0.3), p(0.1);
    const cplx a = q_pochhammer(z, p, 30), b = oracle::poch(z, p, 80);
    CHECK(std::abs(a - b) / std::abs(b) < 1e-12);
    const cplx q4 = std::pow(cplx(0.35, 0.05), 4);
    const cplx m = pochhammer_multi(cplx(0.2, 0.3), {cplx(0.05, 0.01), q4}, 40);
    const cplx mo = oracle::poch2(cplx(0.2, 0.3), cplx(0.05, 0.01), q4, 60);
    CHECK(std::abs(m - mo) / std::abs(mo) < 1e-12);
}

TEST_CASE("theta product vs summation") {
    const cplx z(0.7, 0.2), p(0.2);
    CHECK(std::abs(theta(z, p, 40) - oracle::theta_sum(z, p, 40)) < 1e-10);
    CHECK(std::abs(theta(cplx(1), p, 40)) == 0.0);
    for (cplx w : {cplx(0.5, 0.1), cplx(-0.3, 0.6), cplx(1.4, -0.2)})
        CHECK(std::abs(theta(p / w, p, 40) - theta(w, p, 40)) < 1e-13);
}

TEST_CASE("bracket values") {
    const auto prm = oracle::default_params();
    CHECK(std::abs(bracket(cplx(0), prm, 40)) == 0.0);
    for (cplx u : {cplx(0.3, 0.1), cplx(-0.8, 0.25), cplx(1.3, 0.05)}) {
        const cplx a = bracket(u, prm, 40), b = oracle::bracket(u, prm);
        CHECK(std::abs(a - b) / std::abs(b) < 1e-11);
        CHECK(quasi_period_r_residual(u, prm, 40) < 1e-12);
        CHECK(oddness_residual(u, prm, 40) < 1e-12);
        CHECK(quasi_period_tau_corrected_residual(u, prm, 40) < 1e-12);
        // the unsigned law is off by exactly -1
        CHECK(quasi_period_tau_residual(u, prm, 40) == doctest::Approx(2.0).epsilon(1e-9));
    }
}

TEST_CASE("starred bracket uses r - c") {
    const auto prm = oracle::default_params(1.0);
    const elliptic_params ps({0.35, 0.05}, {1.3, 0.15});
    const cplx u(0.21, 0.13);
    CHECK(std::abs(bracket(u, prm, true, 40) - bracket(u, ps, false, 40)) < 1e-14);
}

TEST_CASE("q-number") {
    const auto prm = oracle::default_params();
    const cplx q = prm.q();
    CHECK(std::abs(qnumber(cplx(2), prm) - (q + 1.0 / q)) < 1e-14);
    CHECK(std::abs(qnumber(cplx(1), prm) - 1.0) < 1e-15);
}

TEST_CASE("curly bracket double product") {
    const auto prm = oracle::default_params();
    const cplx z(0.3, -0.2);
    const cplx a = curly(z, prm, 40), b = oracle::poch2(z, prm.p(), prm.qpow(4.0), 60);
    CHECK(std::abs(a - b) / std::abs(b) < 1e-12);
}

TEST_CASE("extended precision agrees with double") {
    const auto prm = oracle::default_params();
    const auto pl = prm.convert<long double>();
    const cplx u(0.37, 0.11);
    const auto a = bracket(std::complex<long double>(u.real(), u.imag()), pl, 40);
    const cplx b = bracket(u, prm, 40);
    CHECK(std::abs(cplx(double(a.real()), double(a.imag())) - b) / std::abs(b) < 1e-13);
    CHECK(double(quasi_period_r_residual_t(std::complex<long double>(u.real(), u.imag()), pl, 40)) < 1e-16);
}

TEST_CASE("checked evaluation reports convergence") {
    const auto prm = oracle::default_params();
    truncation_policy pol;
    const auto t = bracket_checked(cplx(0.4, 0.1), prm, false, pol);
    CHECK(t.converged);
    CHECK(t.est_error < 1e-12);
    truncation_policy coarse;
    coarse.order = 0;
    coarse.tol = 1e-15;
    // |p| ~ 1e-2, so one factor is not enough
    CHECK_FALSE(bracket_checked(cplx(0.4, 0.1), prm, false, coarse).converged);
}

TEST_CASE("invalid parameters") {
    CHECK_THROWS_AS(elliptic_params(cplx(1.2), cplx(2.0)), invalid_params);
    CHECK_THROWS_AS(elliptic_params(cplx(0.3), cplx(-1.0)), invalid_params);
    // r* = r - c with negative real part pushes |p*| above 1
    CHECK_THROWS_AS(elliptic_params(cplx(0.3), cplx(1.0), cplx(3.0)), invalid_params);
}
