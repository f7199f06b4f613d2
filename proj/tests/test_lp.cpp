#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "biloc/feasibility.hpp"
#include "biloc/lp.hpp"
#include "biloc/quantum.hpp"

using namespace biloc;

TEST_CASE("small programs")
{
    LinearProgram lp(1);
    lp.c = {1};
    lp.maximize = true;
    lp.ub = {3};
    auto r = lp_solve(lp);
    CHECK(r.status == LpStatus::Optimal);
    CHECK(r.x[0] == doctest::Approx(3));

    LinearProgram lp2(2);
    lp2.c = {-1, -2};
    lp2.add_le({{0, 1}, {1, 1}}, 4);
    lp2.add_le({{0, 1}, {1, 3}}, 6);
    auto r2 = lp_solve(lp2);
    CHECK(r2.status == LpStatus::Optimal);
    CHECK(r2.objective == doctest::Approx(-5));
    CHECK(r2.x[0] == doctest::Approx(3));
    CHECK(r2.x[1] == doctest::Approx(1));

    LinearProgram inf(1);
    inf.add_ge({{0, 1}}, 2);
    inf.add_le({{0, 1}}, 1);
    CHECK(lp_solve(inf).status == LpStatus::Infeasible);

    LinearProgram unb(1);
    unb.c = {-1};
    CHECK(lp_solve(unb).status == LpStatus::Unbounded);

    LinearProgram fr(1);
    fr.lb = {-kInf};
    fr.c = {1};
    fr.add_ge({{0, 1}}, -2.5);
    auto r3 = lp_solve(fr);
    CHECK(r3.status == LpStatus::Optimal);
    CHECK(r3.x[0] == doctest::Approx(-2.5));

    LinearProgram eq(3);
    eq.c = {1, 1, 1};
    eq.add_eq({{0, 1}, {1, 1}, {2, 1}}, 1);
    eq.add_eq({{0, 2}, {1, 2}, {2, 2}}, 2);  // redundant
    eq.add_ge({{1, 1}}, 0.25);
    auto r4 = lp_solve(eq);
    CHECK(r4.status == LpStatus::Optimal);
    CHECK(r4.objective == doctest::Approx(1));
    CHECK(r4.x[1] >= 0.25 - 1e-12);
}

TEST_CASE("degenerate program does not cycle")
{
    // Beale's example
    LinearProgram lp(4);
    lp.c = {-0.75, 150, -0.02, 6};
    lp.add_le({{0, 0.25}, {1, -60}, {2, -0.04}, {3, 9}}, 0);
    lp.add_le({{0, 0.5}, {1, -90}, {2, -0.02}, {3, 3}}, 0);
    lp.add_le({{2, 1}}, 1);
    auto r = lp_solve(lp);
    CHECK(r.status == LpStatus::Optimal);
    CHECK(r.objective == doctest::Approx(-0.05));
}

TEST_CASE("local polytope membership")
{
    auto l0 = local_membership(closed_form(ClosedForm::P0_14, 1.0));
    CHECK(l0.local);
    REQUIRE(l0.weights);
    CHECK(correlation_from_weights(*l0.weights).max_abs_diff(closed_form(ClosedForm::P0_14, 1.0)) < 1e-9);
    // |I| + |J| <= 1 is the whole story on the slice
    CHECK(local_membership(closed_form(ClosedForm::PQ14, 1.0)).local);
    CHECK(local_membership(slice_point(Case::C14, 0.3, -0.7)).local);
    CHECK_FALSE(local_membership(slice_point(Case::C14, 0.5, 0.51)).local);
    CHECK_FALSE(local_membership(slice_point(Case::C22, -0.6, 0.41)).local);
    CHECK_FALSE(local_membership(tradeoff_correlation(1.0, 0.72)).local);
    CHECK(local_membership(tradeoff_correlation(1.0, 0.70)).local);
    CHECK(local_membership(closed_form(ClosedForm::PQ22, 0.5)).local);
    CHECK(local_membership(closed_form(ClosedForm::PQ13, 0.5)).local);
}
