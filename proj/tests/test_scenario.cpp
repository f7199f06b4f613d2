#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "biloc/correlators.hpp"
#include "biloc/inequalities.hpp"
#include "biloc/quantum.hpp"
#include "biloc/scenario.hpp"

#include <random>

using namespace biloc;

namespace {

Correlation random_valid(Scenario s, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    Correlation c(s);
    const int block = s.alice.outputs * s.bob.outputs * s.charlie.outputs;
    for (std::size_t k = 0; k < c.data().size(); k += block) {
        double tot = 0;
        for (int i = 0; i < block; ++i) tot += (c.data()[k + i] = U(rng));
        for (int i = 0; i < block; ++i) c.data()[k + i] /= tot;
    }
    return c;
}

// two-strategy mixture q_{00,00,00} = q_{01,01,01} = 1/2
Correlation counterexample()
{
    WeightTable w(Case::C14);
    w.at(0, 0, 0) = 0.5;
    w.at(1, 1, 1) = 0.5;
    return correlation_from_weights(w);
}

}  // namespace

TEST_CASE("scenario sizes and names")
{
    CHECK(Scenario::s22().size() == 64);
    CHECK(Scenario::s14().size() == 64);
    CHECK(Scenario::s13().size() == 48);
    CHECK(Scenario::s13().name() == "13");
    Correlation c(Scenario::s22());
    for (std::size_t k = 0; k < c.data().size(); ++k) CHECK(c.offset(c.unflatten(k)) == k);
}

TEST_CASE("validate")
{
    CHECK(validate(closed_form(ClosedForm::P0_14, 1.0)).empty());
    CHECK(validate(closed_form(ClosedForm::PQ14, 1.0)).empty());
    Correlation bad = closed_form(ClosedForm::P0_14, 1.0);
    bad(0, 0, 0, 0, 0, 0) = 1.5;
    auto v = validate(bad);
    REQUIRE(v.size() == 1);
    CHECK(v[0].what == "normalization");
    CHECK(v[0].magnitude == doctest::Approx(1.5 - 1.0 / 16));
    bad(0, 0, 0, 0, 0, 0) = -0.5;
    CHECK(validate(bad).size() == 2);
    CHECK_THROWS_AS(validate(Correlation(Scenario::s14(), std::vector<double>(10))), DomainError);
    Correlation tiny = closed_form(ClosedForm::P0_14, 1.0);
    tiny(0, 0, 0, 0, 0, 0) = -1e-16;
    clamp_tiny_negatives(tiny);
    CHECK(tiny(0, 0, 0, 0, 0, 0) == 0.0);
}

TEST_CASE("mix")
{
    Correlation pq = closed_form(ClosedForm::PQ14, 1.0), p0 = closed_form(ClosedForm::P0_14, 1.0);
    CHECK(mix({pq}, {1.0}).max_abs_diff(pq) == 0);
    CHECK(mix({pq, p0}, {0.5, 0.5}).max_abs_diff(closed_form(ClosedForm::PQ14, 0.5)) < 1e-15);
    CHECK(mix({p0, p0}, {0.3, 0.7}).max_abs_diff(p0) < 1e-16);
    CHECK_THROWS_AS(mix({pq, p0}, {0.5, 0.6}), DomainError);
    CHECK_THROWS_AS(mix({pq, closed_form(ClosedForm::P0_22, 1.0)}, {0.5, 0.5}), DomainError);
    // associativity in distribution and non-signaling preservation
    Correlation r = random_valid(Scenario::s14(), 3);
    Correlation left = mix({mix({pq, p0}, {0.5, 0.5}), r}, {0.6, 0.4});
    Correlation right = mix({pq, mix({p0, r}, {0.3 / 0.7, 0.4 / 0.7})}, {0.3, 0.7});
    CHECK(left.max_abs_diff(right) < 1e-15);
    CHECK(is_non_signaling(mix({pq, p0, closed_form(ClosedForm::PQ14, 0.3)}, {0.2, 0.5, 0.3})).non_signaling);
}

TEST_CASE("marginals")
{
    Correlation a = marginal(closed_form(ClosedForm::PQ14, 1.0), {Party::Alice});
    for (int x = 0; x < 2; ++x)
        for (int o = 0; o < 2; ++o) CHECK(a(x, 0, 0, o, 0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    Correlation ac = marginal(closed_form(ClosedForm::P0_22, 1.0), {Party::Alice, Party::Charlie});
    for (double v : ac.data()) CHECK(v == doctest::Approx(0.25));
    Correlation ce = marginal(counterexample(), {Party::Alice, Party::Charlie});
    double A1C1 = 0;
    for (int aa = 0; aa < 2; ++aa)
        for (int cc = 0; cc < 2; ++cc) A1C1 += ((aa + cc) & 1 ? -1 : 1) * ce(1, 0, 1, aa, 0, cc);
    CHECK(A1C1 == doctest::Approx(1.0));
    CHECK_THROWS_AS(marginal(ce, {}), DomainError);
}

TEST_CASE("non-signaling")
{
    CHECK(is_non_signaling(closed_form(ClosedForm::PQ22, 1.0)).non_signaling);
    Correlation pr(Scenario::s22());
    for (std::size_t k = 0; k < pr.data().size(); ++k) {
        Index i = pr.unflatten(k);
        pr.data()[k] = (1 + (((i.a + i.b + i.c + i.x * i.y + i.y * i.z) & 1) ? -1 : 1)) / 8.0;
    }
    CHECK(validate(pr).empty());
    CHECK(is_non_signaling(pr).non_signaling);
    CHECK(ij(pr).I == doctest::Approx(1.0));
    CHECK(ij(pr).J == doctest::Approx(1.0));
    // Bob's marginal copies x
    Correlation sig(Scenario::s22());
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int z = 0; z < 2; ++z) sig(x, y, z, 0, x, 0) = 1;
    auto rep = is_non_signaling(sig);
    CHECK_FALSE(rep.non_signaling);
    CHECK(rep.worst == doctest::Approx(1.0));
}

TEST_CASE("Alice-Charlie product check")
{
    CHECK(ac_product_check(closed_form(ClosedForm::PQ14, 1.0)));
    CHECK_FALSE(ac_product_check(counterexample()));
    // product correlation P(a|x)P(b|y)P(c|z)
    Correlation prod(Scenario::s22());
    double pa[2] = {0.3, 0.8}, pb[2] = {0.6, 0.1}, pc[2] = {0.45, 0.9};
    for (std::size_t k = 0; k < prod.data().size(); ++k) {
        Index i = prod.unflatten(k);
        prod.data()[k] = (i.a ? 1 - pa[i.x] : pa[i.x]) * (i.b ? 1 - pb[i.y] : pb[i.y]) * (i.c ? 1 - pc[i.z] : pc[i.z]);
    }
    CHECK(ac_product_check(prod));
}

TEST_CASE("scenario maps")
{
    Correlation m = map_14_to_22(closed_form(ClosedForm::PQ14, 1.0));
    Correlation q = closed_form(ClosedForm::PQ14, 1.0);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int z = 0; z < 2; ++z)
                CHECK(correlator(m, x, y, z, true, 1, true) ==
                      doctest::Approx(correlator(q, x, 0, z, true, y == 0 ? 2 : 1, true)).epsilon(1e-14));
    CHECK(map_14_to_22(closed_form(ClosedForm::P0_14, 1.0)).max_abs_diff(closed_form(ClosedForm::P0_22, 1.0)) < 1e-16);
    // deterministic b = 01
    WeightTable w(Case::C14);
    w.at(0, 1, 0) = 1;
    Correlation d = map_14_to_22(correlation_from_weights(w));
    CHECK(d(0, 0, 0, 0, 0, 0) == 1);
    CHECK(d(0, 1, 0, 0, 1, 0) == 1);

    Correlation m13 = map_13_to_14(closed_form(ClosedForm::PQ13, 1.0));
    CHECK(ij(m13).I == doctest::Approx(2.0 / 3).epsilon(1e-14));
    CHECK(ij(m13).J == doctest::Approx(1.0 / 6).epsilon(1e-14));
    CHECK(map_13_to_14(closed_form(ClosedForm::P0_13, 1.0)).max_abs_diff(closed_form(ClosedForm::P0_14, 1.0)) < 1e-16);
    Correlation merged(Scenario::s13());
    for (int x = 0; x < 2; ++x)
        for (int z = 0; z < 2; ++z) merged(x, 0, z, 0, kBMerged, 0) = 1;
    Correlation mm = map_13_to_14(merged);
    CHECK(mm(0, 0, 0, 0, 2, 0) == 0.5);
    CHECK(mm(0, 0, 0, 0, 3, 0) == 0.5);
    CHECK_THROWS_AS(map_14_to_22(merged), DomainError);
}

TEST_CASE("depolarization onto the slice")
{
    Correlation q = closed_form(ClosedForm::PQ14, 1.0);
    CHECK(depolarize_to_slice(q).max_abs_diff(q) < 1e-15);
    Correlation p0 = closed_form(ClosedForm::P0_14, 1.0);
    CHECK(depolarize_to_slice(p0).max_abs_diff(p0) < 1e-16);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Correlation r = random_valid(Scenario::s14(), seed);
        Correlation d = depolarize_to_slice(r);
        IJValue a = ij(r), b = ij(d);
        CHECK(b.I == doctest::Approx(a.I).epsilon(1e-13));
        CHECK(b.J == doctest::Approx(a.J).epsilon(1e-13));
        CHECK(depolarize_to_slice(d).max_abs_diff(d) < 1e-15);
        CHECK(validate(d).empty());
    }
    // non-signaling points land on I P_I + J P_J + (1 - I - J) P0
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Correlation r = correlation_from_weights(random_weights(Case::C14, seed));
        IJValue a = ij(r);
        CHECK(depolarize_to_slice(r).max_abs_diff(slice_point(Case::C14, a.I, a.J)) < 1e-14);
    }
}
