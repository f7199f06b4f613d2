#include "biloc/correlators.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace biloc {

Case case_of(const Scenario& s)
{
    if (s.is22()) return Case::C22;
    if (s.is14()) return Case::C14;
    if (s.is13()) return Case::C13;
    throw DomainError("scenario must be 22, 14 or 13");
}

Scenario scenario_of(Case k)
{
    switch (k) {
    case Case::C22: return Scenario::s22();
    case Case::C14: return Scenario::s14();
    case Case::C13: return Scenario::s13();
    }
    return Scenario::s14();
}

std::string to_string(Case k) { return k == Case::C22 ? "22" : k == Case::C14 ? "14" : "13"; }

Case case_from_string(const std::string& s)
{
    if (s == "22") return Case::C22;
    if (s == "14") return Case::C14;
    if (s == "13") return Case::C13;
    throw DomainError("unknown scenario '" + s + "' (expected 22, 14 or 13)");
}

bool is_fixed(Case k, int i, int j, int kk)
{
    if (i == 3 || kk == 3) return false;
    return k != Case::C22 || j != 3;
}

Correlation correlation_from_weights(const WeightTable& w)
{
    return Correlation(scenario_of(w.kind), correlation_entries(w));
}

Correlation correlation_from_weights(const WeightTableT<Rational>& w)
{
    auto ex = correlation_entries(w);
    std::vector<double> p(ex.size());
    for (std::size_t k = 0; k < ex.size(); ++k) p[k] = boost::rational_cast<double>(ex[k]);
    Correlation c(scenario_of(w.kind), std::move(p));
    c.set_exact(std::move(ex));
    return c;
}

Correlation correlation_from_correlators(const CorrelatorTable& e)
{
    CorrelatorTable f = e;
    for (std::size_t n = 0; n < f.e.size(); ++n)
        if (!f.fixed[n]) f.e[n] = 0;
    return correlation_from_weights(e_to_q(f));
}

CorrelatorTable fixed_correlators_from_P(const Correlation& c)
{
    Case kind = case_of(c.scenario());
    CorrelatorTable out(kind);
    const auto& s = c.scenario();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < out.nj(); ++j)
            for (int k = 0; k < 4; ++k) {
                if (!out.fixed[(i * out.nj() + j) * 4 + k]) continue;
                // i = 2 -> A_0, i = 1 -> A_1, i = 0 -> no Alice factor (input 0)
                int x = i == 1 ? 1 : 0, z = k == 1 ? 1 : 0;
                int y = kind == Case::C22 && j == 1 ? 1 : 0;
                double v = 0;
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < s.bob.outputs; ++b)
                        for (int cc = 0; cc < 2; ++cc) {
                            int sg = (i && a) != (k && cc) ? -1 : 1;
                            int sb;
                            if (kind == Case::C22) sb = (j && b) ? -1 : 1;
                            else sb = detail::bob_sign(kind, b, j);
                            v += sg * sb * c(x, y, z, a, b, cc);
                        }
                out.at(i, j, k) = v;
            }
    return out;
}

ConstraintReport check_constraints(const CorrelatorTable& e, double tol)
{
    ConstraintReport r;
    WeightTable q = e_to_q(e);
    for (double v : q.q) r.worst_negative = std::min(r.worst_negative, v);
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k)
            r.worst_biloc = std::max(r.worst_biloc, std::abs(e.at(i, 0, k) - e.at(i, 0, 0) * e.at(0, 0, k)));
    r.nonneg_ok = r.worst_negative >= -tol;
    r.biloc_ok = r.worst_biloc <= tol;
    return r;
}

ConstraintReport check_constraints(const CorrelatorTableT<Rational>& e)
{
    ConstraintReport r;
    auto q = e_to_q(e);
    for (const auto& v : q.q)
        if (v < Rational(0)) {
            r.nonneg_ok = false;
            r.worst_negative = std::min(r.worst_negative, boost::rational_cast<double>(v));
        }
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) {
            Rational d = e.at(i, 0, k) - e.at(i, 0, 0) * e.at(0, 0, k);
            if (d != Rational(0)) {
                r.biloc_ok = false;
                r.worst_biloc = std::max(r.worst_biloc, std::abs(boost::rational_cast<double>(d)));
            }
        }
    return r;
}

WeightTable random_weights(Case k, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> ex(1.0);
    WeightTable w(k);
    double s = 0;
    for (auto& v : w.q) s += (v = ex(rng));
    for (auto& v : w.q) v /= s;
    return w;
}

}  // namespace biloc
