#include <doctest.h>

#include "ellq/algebroid.hpp"
#include "oracles.hpp"

using namespace ellq;
using namespace ellq::algebroid;
using evalrep::eval_rep;

namespace {
truncation_policy pol;
const elliptic_params prm0({0.35, 0.05}, {2.3, 0.15}, 0.0);
const cplx u(0.31, 0.12), u2(-0.17, 0.2), P(0.41, 0.17);
}  // namespace

TEST_CASE("counit") {
    const auto e = counit(1, 1);
    CHECK(e.rows() == 1);
    CHECK(e(0.3)(0, 0) == cplx(1));
    CHECK(counit(1, -1)(0.3)(0, 0) == cplx(0));
    CHECK(counit(-1, -1).charge() == -1);
    for (int e1 : {1, -1})
        for (int e2 : {1, -1}) CHECK(counit_check(e1, e2, u, eval_rep{2, cplx(-0.22, 0.1)}, P, prm0, pol) < 1e-12);
}

TEST_CASE("coassociativity") {
    const eval_rep a{1, cplx(0.05, 0.03)}, b{2, cplx(-0.22, 0.1)}, c{1, cplx(0.13, -0.04)};
    CHECK(coassociativity(u, a, b, c, P, prm0, pol) < 1e-12);
}

TEST_CASE("coproduct realized on a pair of modules") {
    const eval_rep a{1, cplx(0.05, 0.03)}, b{1, cplx(-0.22, 0.1)};
    const auto d = coproduct_realized(1, 1, u, a, b, prm0, pol);
    CHECK(d.rows() == 4);
    CHECK(coproduct_rll_residual(u, u2, a, b, P, prm0, pol) < 1e-9);
}

TEST_CASE("antipode axioms") {
    for (int l : {1, 2}) {
        const eval_rep rep{l, cplx(0.05, 0.03)};
        const auto r = antipode_check(u, rep, P, prm0, pol);
        CHECK(r.left < 1e-10);
        CHECK(r.right < 1e-10);
        CHECK(antipode_rll_residual(u, u2, rep, P, prm0, pol) < 1e-9);
    }
}

TEST_CASE("intertwiner consistency") {
    for (int n : {1, 2}) {
        const auto r = intertwiner_consistency(n, u, u2, cplx(0.45, 0.07), P, prm0, pol);
        CHECK(r.type1 < 1e-9);
        CHECK(r.type2 < 1e-9);
        const auto d = intertwiner_consistency(n, u, u, cplx(0.45, 0.07), P, prm0, pol);
        CHECK(d.type1 < 1e-12);
        CHECK(d.type2 < 1e-12);
    }
}
