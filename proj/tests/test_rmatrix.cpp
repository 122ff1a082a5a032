#include <doctest.h>

#include <Eigen/Dense>

#include "ellq/dynrep.hpp"
#include "ellq/rmatrix.hpp"
#include "oracles.hpp"

using namespace ellq;
using namespace ellq::rmatrix;
using dynrep::cmat;

namespace {

truncation_policy pol;

// 4x4 R(u, s) straight from theta sums
cmat r_oracle(cplx u, cplx s, const elliptic_params& prm) {
    auto B = [&](cplx x) { return oracle::bracket(x, prm); };
    cmat r = cmat::Zero(4, 4);
    r(0, 0) = r(3, 3) = 1.0;
    r(1, 1) = B(s + 1.0) * B(s - 1.0) / (B(s) * B(s)) * B(u) / B(1.0 + u);
    r(1, 2) = B(1.0) * B(s + u) / (B(s) * B(1.0 + u));
    r(2, 1) = B(1.0) * B(s - u) / (B(s) * B(1.0 + u));
    r(2, 2) = B(u) / B(1.0 + u);
    return r * rho_plus(u, prm, false, pol);
}

// R_ij(s + shift) on (C^2)^3, the shift being the weight of the spectator space
cmat embed(int i, int j, const std::function<cmat(cplx)>& R, cplx s, bool shift) {
    const int k = 3 - i - j;
    cmat out = cmat::Zero(8, 8);
    for (int col = 0; col < 8; ++col) {
        int a[3] = {(col >> 2) & 1, (col >> 1) & 1, col & 1};
        const double hk = a[k] == 0 ? 1.0 : -1.0;
        const cmat m = R(s + (shift ? hk : 0.0));
        const int in = a[i] * 2 + a[j];
        for (int o = 0; o < 4; ++o) {
            int b[3] = {a[0], a[1], a[2]};
            b[i] = o / 2;
            b[j] = o % 2;
            out((b[0] << 2) | (b[1] << 1) | b[2], col) += m(o, in);
        }
    }
    return out;
}

double dybe_oracle(cplx u1, cplx u2, cplx u3, cplx s, const elliptic_params& prm) {
    auto R = [&](cplx u) { return [&prm, u](cplx s) { return r_matrix(u, s, prm, false, pol).full(); }; };
    const cmat lhs = embed(0, 1, R(u1 - u2), s, true) * embed(0, 2, R(u1 - u3), s, false) * embed(1, 2, R(u2 - u3), s, true);
    const cmat rhs = embed(1, 2, R(u2 - u3), s, false) * embed(0, 2, R(u1 - u3), s, true) * embed(0, 1, R(u1 - u2), s, false);
    return (lhs - rhs).cwiseAbs().maxCoeff() / lhs.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("R entries against theta-sum oracle") {
    const auto prm = oracle::default_params();
    for (auto [u, s] : {std::pair{cplx(0.3, 0.1), cplx(0.7, 0.2)}, std::pair{cplx(-0.45, 0.22), cplx(1.6, 0.08)}}) {
        const cmat a = r_matrix(u, s, prm, false, pol).full(), b = r_oracle(u, s, prm);
        CHECK(dynrep::rel_diff(a, b) < 1e-11);
    }
}

TEST_CASE("ice rule and zero pattern") {
    const auto prm = oracle::default_params();
    const auto r = r_matrix(cplx(0.3, 0.1), cplx(0.7, 0.2), prm, true, pol);
    CHECK(ice_violation(r) == 0.0);
    CHECK(r.bare(0, 1) == cplx(0));
    CHECK(r.bare(3, 0) == cplx(0));
    CHECK(r.bare(0, 0) == cplx(1));
}

TEST_CASE("u = 0 degeneration") {
    const auto prm = oracle::default_params();
    for (bool st : {false, true}) {
        const auto w = boltzmann(0.0, cplx(0.6, 0.17), prm, st, pol);
        CHECK(std::abs(w.b) < 1e-15);
        CHECK(std::abs(w.bbar) < 1e-15);
        CHECK(std::abs(w.c - 1.0) < 1e-12);
        CHECK(std::abs(w.cbar - 1.0) < 1e-12);
    }
    // {1/z} vanishes at z = 1
    CHECK(std::abs(rho_plus(0.0, prm, false, pol)) < 1e-15);
}

TEST_CASE("rho") {
    const elliptic_params p0({0.35, 0.05}, {2.3, 0.15}, 0.0);
    const cplx u(0.31, 0.12);
    CHECK(std::abs(rho(u, p0, pol) - 1.0) < 1e-15);
    const auto prm = oracle::default_params();
    const auto pl = prm.convert<long double>();
    const auto hi = rho_plus_t(std::complex<long double>(u.real(), u.imag()), pl, 40);
    const cplx lo = rho_plus(u, prm, false, pol);
    CHECK(std::abs(cplx(double(hi.real()), double(hi.imag())) - lo) / std::abs(lo) < 1e-9);
    truncation_policy p80;
    p80.order = 80;
    CHECK(std::abs(rho_plus(u, prm, false, p80) - lo) / std::abs(lo) < 1e-13);
}

TEST_CASE("kappa") {
    const elliptic_params p0({0.35, 0.05}, {2.3, 0.15}, 0.0);
    CHECK(kappa(p0, pol) == cplx(1));
    for (double c : {1.0, 2.0}) {
        const auto prm = oracle::default_params(c);
        const cplx k = kappa(prm, pol);
        CHECK(std::abs(k - kappa_extrapolated(prm, pol)) / std::abs(k) < 1e-7);
        CHECK(std::abs(k * kappa_moduli(prm.p(), prm.pstar(), prm, pol) - 1.0) < 1e-13);
    }
}

TEST_CASE("dynamical YBE") {
    const auto prm = oracle::default_params();
    const cplx u1(0.31, 0.12), u2(-0.17, 0.2), u3(0.45, 0.07), s(0.41, 0.17);
    const double o = dybe_oracle(u1, u2, u3, s, prm);
    CHECK(o < 1e-11);
    CHECK(dybe_residual(u1, u2, u3, s, prm, false, pol) < 1e-11);
    CHECK(dybe_residual(u1, u2, u3, s, prm, true, pol) < 1e-11);
    CHECK(dybe_residual(u1, u1, u3, s, prm, false, pol) < 1e-12);
}

TEST_CASE("fusion") {
    const auto prm = oracle::default_params(0.0);
    const cplx u(0.23, 0.11), s(0.52, 0.19);
    CHECK(dynrep::rel_diff(fuse_r(1, u, s, prm, pol).full(), r_matrix(u, s, prm, false, pol).full()) < 1e-15);
    for (int l : {2, 3}) {
        const auto f = fuse_r(l, u, s, prm, pol);
        CHECK(f.bare.rows() == 2 * (l + 1));
        CHECK(ice_violation(f) == 0.0);
    }
    CHECK(mixed_dybe_residual(2, cplx(0.31, 0.12), cplx(-0.17, 0.2), cplx(0.45, 0.07), s, prm, pol) < 1e-10);
    CHECK_THROWS_AS(fuse_r(0, u, s, prm, pol), domain_error);
}

TEST_CASE("pole proximity") {
    const auto prm = oracle::default_params();
    CHECK_THROWS_AS(r_matrix(cplx(0.3, 0.1), cplx(0.0), prm, false, pol), pole_proximity);
    CHECK_THROWS_AS(r_matrix(cplx(-1.0), cplx(0.4, 0.1), prm, false, pol), pole_proximity);
}
