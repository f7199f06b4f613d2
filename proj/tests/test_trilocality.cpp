#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "biloc/scenario.hpp"
#include "biloc/trilocality.hpp"

#include <cmath>

using namespace biloc;

namespace {

double max_diff(const FourPartiteCorrelation& a, const FourPartiteCorrelation& b)
{
    double m = 0;
    for (int i = 0; i < 16; ++i) m = std::max(m, std::abs(a.p[i] - b.p[i]));
    return m;
}

BipartiteConditional deterministic(int a0, int a1, int b0, int b1)
{
    BipartiteConditional c;
    int as[2] = {a0, a1}, bs[2] = {b0, b1};
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) c(as[x], bs[y], x, y) = 1;
    return c;
}

}  // namespace

TEST_CASE("four-partite example")
{
    FourPartiteCorrelation f = example_quantum_fourpartite();
    CHECK(f(0, 0, 0, 0) == doctest::Approx((1 - 1 / std::sqrt(2.0)) / 16));
    double s = 0;
    for (double v : f.p) s += v;
    CHECK(s == doctest::Approx(1.0));
    CHECK(max_diff(f, example_quantum_fourpartite_kernel()) < 1e-12);
    BipartiteConditional c = four_to_conditional(f);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    CHECK(c(a, b, x, y) ==
                          doctest::Approx(0.25 * (1 - ((a + b + x * y) & 1 ? -1 : 1) / std::sqrt(2.0))));
    CHECK(c.px[0] == doctest::Approx(0.5));
    CHECK(c.py[1] == doctest::Approx(0.5));
    CHECK(conditional_chsh(c) == doctest::Approx(2 * std::sqrt(2.0)));
    CHECK_FALSE(bipartite_local_model(c));
}

TEST_CASE("conditioning errors")
{
    FourPartiteCorrelation u;
    for (double& v : u.p) v = 1.0 / 16;
    BipartiteConditional cu = four_to_conditional(u);
    for (double v : cu.p) CHECK(v == doctest::Approx(0.25));
    FourPartiteCorrelation corr;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            corr(0, a, b, 0) = 1.0 / 8;
            corr(1, a, b, 1) = 1.0 / 8;
        }
    CHECK_THROWS_AS(four_to_conditional(corr), DomainError);
    FourPartiteCorrelation zero;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int y = 0; y < 2; ++y) zero(0, a, b, y) = 1.0 / 8;
    CHECK_THROWS_AS(four_to_conditional(zero), DomainError);
    FourPartiteCorrelation bad = u;
    bad.p[0] = 0.5;
    CHECK_THROWS_AS(four_to_conditional(bad), DomainError);
}

TEST_CASE("local conditionals lift to trilocal decompositions")
{
    BipartiteConditional d = deterministic(0, 0, 0, 0);
    CHECK(conditional_chsh(d) == doctest::Approx(2.0));
    auto m = bipartite_local_model(d);
    REQUIRE(m);
    TrilocalDecomposition t = conditional_to_four(d, *m);
    FourPartiteCorrelation f = t.reproduce();
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) CHECK(f(x, 0, 0, y) == doctest::Approx(0.25).epsilon(1e-12));

    // a = x, b = 0, skewed inputs
    BipartiteConditional e = deterministic(0, 1, 0, 0);
    e.px = {0.3, 0.7};
    e.py = {0.6, 0.4};
    auto me = bipartite_local_model(e);
    REQUIRE(me);
    FourPartiteCorrelation fe = conditional_to_four(e, *me).reproduce();
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) CHECK(fe(x, x, 0, y) == doctest::Approx(e.px[x] * e.py[y]).epsilon(1e-12));

    // mixture of two deterministic strategies, with a hand-written model
    BipartiteConditional mx;
    BipartiteConditional d1 = deterministic(0, 1, 1, 0), d2 = deterministic(1, 1, 0, 1);
    for (int i = 0; i < 16; ++i) mx.p[i] = 0.25 * d1.p[i] + 0.75 * d2.p[i];
    BipartiteLocalModel w{};
    w[(0 * 2 + 1) * 4 + (1 * 2 + 0)] = 0.25;
    w[(1 * 2 + 1) * 4 + (0 * 2 + 1)] = 0.75;
    FourPartiteCorrelation fm = conditional_to_four(mx, w).reproduce();
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) CHECK(std::abs(fm(x, a, b, y) - mx(a, b, x, y) / 4) < 1e-14);
}

TEST_CASE("round trip on trilocal tensors")
{
    for (double vis : {0.0, 0.5, 1 / std::sqrt(2.0)}) {
        FourPartiteCorrelation f;
        for (int x = 0; x < 2; ++x)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    for (int y = 0; y < 2; ++y)
                        f(x, a, b, y) = (1 - vis * ((a + b + x * y) & 1 ? -1 : 1) / std::sqrt(2.0)) / 16;
        BipartiteConditional c = four_to_conditional(f);
        CHECK(conditional_chsh(c) <= 2 + 1e-12);
        auto m = bipartite_local_model(c);
        REQUIRE(m);
        CHECK(max_diff(conditional_to_four(c, *m).reproduce(), f) < 1e-12);
    }
}
