#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "biloc/feasibility.hpp"
#include "biloc/inequalities.hpp"
#include "biloc/quantum.hpp"

#include <cmath>
#include <cstdlib>
#include <random>

using namespace biloc;

namespace {

BilocalModel random_model(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> ex(1.0);
    BilocalModel m(Scenario::s14());
    double s1 = 0, s2 = 0;
    for (int i = 0; i < 4; ++i) {
        s1 += (m.rho1[i] = ex(rng));
        s2 += (m.rho2[i] = ex(rng));
    }
    for (int i = 0; i < 4; ++i) {
        m.rho1[i] /= s1;
        m.rho2[i] /= s2;
    }
    for (int a = 0; a < 4; ++a)
        for (int g = 0; g < 4; ++g) {
            double s = 0;
            for (int b = 0; b < 4; ++b) s += (m.response(a, g, 0, b) = ex(rng));
            for (int b = 0; b < 4; ++b) m.response(a, g, 0, b) /= s;
        }
    return m;
}

// each party independently replaces its output by a uniform one with probability 1 - xi
Correlation local_noise(const Correlation& p, double xi)
{
    const Scenario& s = p.scenario();
    Correlation out(s);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < s.bob.inputs; ++y)
            for (int z = 0; z < 2; ++z)
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < s.bob.outputs; ++b)
                        for (int c = 0; c < 2; ++c)
                            for (int a2 = 0; a2 < 2; ++a2)
                                for (int b2 = 0; b2 < s.bob.outputs; ++b2)
                                    for (int c2 = 0; c2 < 2; ++c2) {
                                        double ka = (a == a2) * xi + (1 - xi) / 2;
                                        double kb = (b == b2) * xi + (1 - xi) / s.bob.outputs;
                                        double kc = (c == c2) * xi + (1 - xi) / 2;
                                        out(x, y, z, a2, b2, c2) += ka * kb * kc * p(x, y, z, a, b, c);
                                    }
    return out;
}

SearchConfig quick(int restarts = 16)
{
    SearchConfig c;
    c.restarts = restarts;
    return c;
}

}  // namespace

TEST_CASE("model evaluation")
{
    BilocalModel m = random_model(3);
    Correlation p = model_to_correlation(m);
    CHECK(validate(p).empty());
    CHECK(is_non_signaling(p).non_signaling);
    CHECK(ac_product_check(p, 1e-12));
    BilocalModel back = BilocalModel::from_weights(model_to_weights(m));
    CHECK(model_to_correlation(back).max_abs_diff(p) < 1e-14);
    for (int i = 0; i < 4; ++i) CHECK(back.rho1[i] == doctest::Approx(m.rho1[i]));

    // deterministic point: everyone outputs 0
    BilocalModel d(Scenario::s14());
    d.rho1 = {1, 0, 0, 0};
    d.rho2 = {1, 0, 0, 0};
    for (int a = 0; a < 4; ++a)
        for (int g = 0; g < 4; ++g) d.response(a, g, 0, 0) = 1;
    Correlation pd = model_to_correlation(d);
    for (int x = 0; x < 2; ++x)
        for (int z = 0; z < 2; ++z) CHECK(pd(x, 0, z, 0, 0, 0) == 1);
}

TEST_CASE("heuristic search")
{
    Certificate ok = heuristic_search(closed_form(ClosedForm::PQ14, 0.49), quick());
    CHECK(ok.verdict == Verdict::Bilocal);
    REQUIRE(ok.model);
    CHECK(ok.distance <= 1e-10);
    CHECK(model_to_correlation(*ok.model).max_abs_diff(closed_form(ClosedForm::PQ14, 0.49)) < 1e-8);

    Certificate bad = heuristic_search(closed_form(ClosedForm::PQ14, 1.0), quick(4));
    CHECK(bad.verdict == Verdict::Inconclusive);
    CHECK(bad.distance > 1e-4);
    CHECK(bad.restarts_used == 4);

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Correlation p = model_to_correlation(random_model(seed));
        Certificate c = heuristic_search(p, quick());
        CHECK(c.verdict == Verdict::Bilocal);
    }
    CHECK(heuristic_search(closed_form(ClosedForm::PQ22, 0.45), quick()).verdict == Verdict::Bilocal);
    CHECK(heuristic_search(closed_form(ClosedForm::PQ13, 0.6), quick()).verdict == Verdict::Bilocal);
    CHECK(heuristic_search(detection_family(2.0 / 3, 1.0), quick()).verdict == Verdict::Bilocal);
}

TEST_CASE("search is deterministic across thread counts")
{
    Correlation p = closed_form(ClosedForm::PQ14, 0.7);
    SearchConfig c = quick(8);
    c.seed = 11;
    setenv("BILOC_THREADS", "1", 1);
    Certificate a = heuristic_search(p, c);
    setenv("BILOC_THREADS", "4", 1);
    Certificate b = heuristic_search(p, c);
    unsetenv("BILOC_THREADS");
    CHECK(a.distance == b.distance);
    CHECK(a.restarts_used == b.restarts_used);
    REQUIRE(a.model);
    REQUIRE(b.model);
    CHECK(a.model->bob == b.model->bob);
    CHECK(a.model->rho1 == b.model->rho1);
}

TEST_CASE("relaxation certificates")
{
    Certificate a = relaxation_bound(closed_form(ClosedForm::PQ14, 1.0));
    CHECK(a.verdict == Verdict::NonBilocal);
    Certificate b = relaxation_bound(closed_form(ClosedForm::PQ14, 0.52));
    CHECK(b.verdict == Verdict::NonBilocal);
    Certificate c = relaxation_bound(closed_form(ClosedForm::PQ14, 0.5));
    CHECK(c.verdict == Verdict::Inconclusive);
    CHECK(relaxation_bound(detection_family(0.7, 0.99)).verdict == Verdict::NonBilocal);
    CHECK(relaxation_bound(closed_form(ClosedForm::PQ13, 0.7)).verdict == Verdict::NonBilocal);

    // the fast paths
    WeightTable w(Case::C14);
    w.at(0, 0, 0) = 0.5;
    w.at(3, 3, 3) = 0.5;
    Certificate ce = certify_nonbilocal(correlation_from_weights(w));
    CHECK(ce.verdict == Verdict::NonBilocal);
    CHECK(ce.reason.find("Alice and Charlie") != std::string::npos);
    Certificate q = certify_nonbilocal(closed_form(ClosedForm::PQ14, 1.0));
    CHECK(q.verdict == Verdict::NonBilocal);
    Correlation sig(Scenario::s14());
    for (int x = 0; x < 2; ++x)
        for (int z = 0; z < 2; ++z) sig(x, 0, z, 0, x, 0) = 1;
    CHECK(certify_nonbilocal(sig).verdict == Verdict::NonBilocal);
}

TEST_CASE("soundness: bilocal points are never certified")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Correlation p = model_to_correlation(random_model(100 + seed));
        Certificate c = certify_nonbilocal(p);
        CHECK(c.verdict != Verdict::NonBilocal);
    }
    for (double V : {0.2, 0.45, 0.5}) CHECK(certify_nonbilocal(closed_form(ClosedForm::PQ14, V)).verdict != Verdict::NonBilocal);
    CHECK(certify_nonbilocal(detection_family(2.0 / 3, 1.0)).verdict != Verdict::NonBilocal);
}

TEST_CASE("connectedness: local noise keeps points bilocal")
{
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        Correlation p = model_to_correlation(random_model(seed));
        for (double xi : {0.25, 0.5, 0.75}) CHECK(heuristic_search(local_noise(p, xi), quick()).verdict == Verdict::Bilocal);
    }
    CHECK(local_noise(closed_form(ClosedForm::PQ14, 1.0), 0.0).max_abs_diff(closed_form(ClosedForm::P0_14, 1.0)) < 1e-15);
}

TEST_CASE("star-convexity with Alice's marginal fixed, non-convexity overall")
{
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        Correlation p = model_to_correlation(random_model(seed + 40));
        Correlation a = marginal(p, {Party::Alice});
        Correlation star(Scenario::s14());
        for (int x = 0; x < 2; ++x)
            for (int z = 0; z < 2; ++z)
                for (int al = 0; al < 2; ++al)
                    for (int b = 0; b < 4; ++b)
                        for (int c = 0; c < 2; ++c) star(x, 0, z, al, b, c) = a(x, 0, 0, al, 0, 0) * (b == 1 ? 0.7 : 0.1) * (c ? 0.3 : 0.7);
        for (double lam : {0.3, 0.7}) CHECK(heuristic_search(mix({p, star}, {lam, 1 - lam}), quick()).verdict == Verdict::Bilocal);
    }
    // P_I and P_J are bilocal; their midpoint is P_Q14, which is not
    Correlation pi = slice_point(Case::C14, 1, 0), pj = slice_point(Case::C14, 0, 1);
    CHECK(heuristic_search(pi, quick()).verdict == Verdict::Bilocal);
    CHECK(heuristic_search(pj, quick()).verdict == Verdict::Bilocal);
    Correlation mid = mix({pi, pj}, {0.5, 0.5});
    CHECK(mid.max_abs_diff(closed_form(ClosedForm::PQ14, 1.0)) < 1e-15);
    CHECK(certify_nonbilocal(mid).verdict == Verdict::NonBilocal);
}

TEST_CASE("threshold bisection")
{
    auto r = bisect_threshold([](double v) { return v <= 0.3; }, [](double v) { return v > 0.3; }, 0, 1, 1e-3);
    CHECK(r.bracketed);
    CHECK(r.verdict != Verdict::Inconclusive);
    CHECK(r.lower <= 0.3);
    CHECK(r.upper >= 0.3);
    CHECK(r.upper - r.lower <= 2e-3);
    auto n = bisect_threshold([](double) { return true; }, [](double) { return false; }, 0, 1, 1e-3);
    CHECK_FALSE(n.bracketed);
    CHECK(n.verdict == Verdict::Inconclusive);
    auto g = bisect_threshold([](double v) { return v <= 0.6; }, [](double v) { return v > 0.4; }, 0, 1, 1e-3);
    CHECK(g.verdict == Verdict::Inconclusive);
}

TEST_CASE("local membership agrees with the local bound on the slice")
{
    for (double I : {0.1, 0.4, 0.6})
        for (double J : {0.1, 0.3, 0.5}) {
            bool local = std::abs(I) + std::abs(J) <= 1 + 1e-12;
            CHECK(local_membership(slice_point(Case::C14, I, J)).local == local);
        }
}
