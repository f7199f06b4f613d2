#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "biloc/correlators.hpp"
#include "biloc/inequalities.hpp"
#include "biloc/quantum.hpp"

#include <cmath>
#include <random>

using namespace biloc;

namespace {

void check_decomposition(const TableDecomposition& d, bool bilocal = true)
{
    ConstraintReport r = check_constraints(d.e, 1e-12);
    CHECK(r.nonneg_ok);
    if (bilocal) CHECK(r.biloc_ok);
    double s = 0;
    for (double q : d.q.q) s += q;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(correlation_from_weights(d.q).max_abs_diff(d.target) < 1e-12);
}

bool fails_somewhere(TableId id, const TableParams& p)
{
    TableDecomposition d = table_decomposition(id, p, false);
    ConstraintReport r = check_constraints(d.e, 1e-12);
    return !r.nonneg_ok || !r.biloc_ok || correlation_from_weights(d.q).max_abs_diff(d.target) > 1e-12;
}

}  // namespace

TEST_CASE("q <-> e round trips on random tables")
{
    for (Case k : {Case::C22, Case::C14, Case::C13})
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            WeightTable w = random_weights(k, seed);
            WeightTable back = e_to_q(q_to_e(w));
            double m = 0;
            for (std::size_t i = 0; i < w.q.size(); ++i) m = std::max(m, std::abs(w.q[i] - back.q[i]));
            CHECK(m < 1e-14);
        }
}

TEST_CASE("correlator conventions")
{
    WeightTable w(Case::C14);
    w.at(0, 0, 0) = 1;
    CorrelatorTable e = q_to_e(w);
    for (double v : e.e) CHECK(v == 1);
    WeightTable u(Case::C14);
    for (double& q : u.q) q = 1.0 / 64;
    CorrelatorTable eu = q_to_e(u);
    CHECK(eu.at(0, 0, 0) == doctest::Approx(1.0));
    for (std::size_t i = 1; i < eu.e.size(); ++i) CHECK(std::abs(eu.e[i]) < 1e-15);
    // the Alice-Charlie correlated counterexample
    WeightTable ce(Case::C14);
    ce.at(0, 0, 0) = 0.5;
    ce.at(3, 3, 3) = 0.5;
    CorrelatorTable ec = q_to_e(ce);
    CHECK(ec.at(1, 0, 1) == doctest::Approx(1.0));
    CHECK(ec.at(1, 0, 0) == doctest::Approx(0.0));
    CHECK(ec.at(1, 1, 1) == doctest::Approx(0.0));
    CHECK_FALSE(check_constraints(ec).biloc_ok);
    CHECK(check_constraints(ec).nonneg_ok);
}

TEST_CASE("fixed correlators reproduce P")
{
    for (Case k : {Case::C22, Case::C14, Case::C13})
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            WeightTable w = random_weights(k, seed);
            Correlation p = correlation_from_weights(w);
            CorrelatorTable f = fixed_correlators_from_P(p);
            CorrelatorTable full = q_to_e(w);
            for (std::size_t i = 0; i < f.e.size(); ++i)
                if (f.fixed[i]) CHECK(std::abs(f.e[i] - full.e[i]) < 1e-14);
            CHECK(correlation_from_correlators(f).max_abs_diff(p) < 1e-14);
            CHECK(correlation_from_correlators(full).max_abs_diff(p) < 1e-14);
        }
    int n22 = 0, n14 = 0, n13 = 0;
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) {
            for (int j = 0; j < 4; ++j) {
                n22 += is_fixed(Case::C22, i, j, k);
                n14 += is_fixed(Case::C14, i, j, k);
            }
            for (int j = 0; j < 3; ++j) n13 += is_fixed(Case::C13, i, j, k);
        }
    CHECK(n14 == 36);
    CHECK(n13 == 27);
    CHECK(n22 == 27);
}

TEST_CASE("Tables I and II over the domain")
{
    for (TableId id : {TableId::I, TableId::II})
        for (int a = 0; a <= 20; ++a)
            for (int b = 0; b <= 20; ++b) {
                double sI = a / 20.0, sJ = b / 20.0;
                if (sI + sJ > 1 + 1e-12) continue;
                for (int sgn = 0; sgn < 4; ++sgn) {
                    TableParams p;
                    p.I = (sgn & 1 ? -1 : 1) * sI * sI;
                    p.J = (sgn & 2 ? -1 : 1) * sJ * sJ;
                    check_decomposition(table_decomposition(id, p));
                }
            }
    TableParams out;
    out.I = 0.25 + 1e-3;
    out.J = 0.25 + 1e-3;
    CHECK_THROWS_AS(table_decomposition(TableId::II, out), DomainError);
    CHECK(fails_somewhere(TableId::II, out));
    CHECK(fails_somewhere(TableId::I, out));
    TableParams badK;
    badK.I = 0.25;
    badK.J = 0.25;
    badK.K = 0.5;
    CHECK_THROWS_AS(table_decomposition(TableId::I, badK), DomainError);
}

TEST_CASE("Table III over the domain")
{
    int tried = 0;
    for (int kk = -4; kk <= 4; ++kk)
        for (int a = 0; a <= 20; ++a)
            for (int b = 0; b <= 20; ++b)
                for (int l = -2; l <= 2; ++l)
                    for (int m = -2; m <= 2; ++m) {
                        TableParams p;
                        p.K = kk / 4.0;
                        double K = *p.K;
                        double d2 = (1 - K) * (1 - K) / 2;
                        p.L = l / 4.0 * d2;
                        p.M = m / 4.0 * d2;
                        p.I = (1 + K) * (1 + K) / 4 * a / 20.0 * (a % 2 ? -1 : 1);
                        p.J = (d2 + p.L + p.M) / 4 * b / 20.0 * (b % 2 ? -1 : 1);
                        try {
                            auto d = table_decomposition(TableId::III, p);
                            check_decomposition(d);
                            ++tried;
                        } catch (const DomainError&) {
                        }
                    }
    CHECK(tried > 1000);
    TableParams p;
    p.K = 0;
    p.I = 0.25 + 1e-3;
    CHECK_THROWS_AS(table_decomposition(TableId::III, p), DomainError);
    CHECK(fails_somewhere(TableId::III, p));
}

TEST_CASE("Table IV over the domain")
{
    for (int a = 0; a <= 20; ++a)
        for (int b = 0; b <= 20; ++b) {
            TableParams p;
            p.eta = a / 20.0;
            p.V = detection_vbiloc(p.eta) * b / 20.0;
            auto d = table_decomposition(TableId::IV, p);
            check_decomposition(d);
            CHECK(d.target.max_abs_diff(detection_family(p.eta, p.V)) < 1e-14);
        }
    CHECK(detection_offset(1.0) == 0);
    CHECK(detection_offset(0.7) == doctest::Approx(0.2));
    CHECK(detection_offset(0.6) == doctest::Approx(0.2));
    CHECK(detection_vbiloc(2.0 / 3) == doctest::Approx(1.0));
    CHECK(detection_vbiloc(1.0) == doctest::Approx(0.5));
    for (double eta : {0.7, 0.8, 0.9, 1.0}) {
        TableParams p;
        p.eta = eta;
        p.V = detection_vbiloc(eta) + 1e-3;
        CHECK_THROWS_AS(table_decomposition(TableId::IV, p), DomainError);
        CHECK(fails_somewhere(TableId::IV, p));
    }
}

TEST_CASE("Table V over the domain")
{
    for (TableId id : {TableId::V_local, TableId::V_bilocal})
        for (int a = 0; a <= 20; ++a)
            for (int b = 0; b <= 20; ++b) {
                TableParams p;
                p.xi = a / 20.0;
                auto tp = tradeoff_front(p.xi);
                p.V = (id == TableId::V_local ? tp.V_loc : tp.V_biloc) * b / 20.0;
                auto d = table_decomposition(id, p);
                // the local table uses one shared variable, so it need not factorize
                check_decomposition(d, id == TableId::V_bilocal);
            }
    for (double xi : {0.0, 0.5, 1.0}) {
        TableParams p;
        p.xi = xi;
        p.V = tradeoff_front(xi).V_biloc + 1e-3;
        CHECK_THROWS_AS(table_decomposition(TableId::V_bilocal, p), DomainError);
        CHECK(fails_somewhere(TableId::V_bilocal, p));
    }
}

TEST_CASE("exact rational tables")
{
    ExactTableParams p;
    p.I = Rational(1, 4);
    p.J = Rational(1, 4);
    p.K = Rational(0);
    for (TableId id : {TableId::I, TableId::II}) {
        auto w = table_weights_exact(id, p);
        Rational s(0);
        for (const auto& q : w.q) {
            CHECK(q >= Rational(0));
            s += q;
        }
        CHECK(s == Rational(1));
        auto e = q_to_e(w);
        CHECK(check_constraints(e).biloc_ok);
        CHECK(e_to_q(e).q == w.q);
    }
    ExactTableParams d;
    d.eta = Rational(7, 10);
    d.V = Rational(48, 49);  // (1 - e^2) / (2 eta^2) with e = 1/5
    auto w = table_weights_exact(TableId::IV, d);
    for (const auto& q : w.q) CHECK(q >= Rational(0));
    CHECK(check_constraints(q_to_e(w)).biloc_ok);
    Correlation c = correlation_from_weights(w);
    REQUIRE(c.exact());
    CHECK(c.max_abs_diff(detection_family(0.7, 48.0 / 49)) < 1e-14);
    CHECK_THROWS_AS(table_weights_exact(TableId::V_local, d), DomainError);
}
