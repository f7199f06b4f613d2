#include "biloc/inequalities.hpp"

#include <algorithm>
#include <cmath>

namespace biloc {

double IJValue::biloc_lhs() const { return std::sqrt(std::abs(I)) + std::sqrt(std::abs(J)); }
double IJValue::local_lhs() const { return std::abs(I) + std::abs(J); }
double IJValue::local_lhs13() const { return std::abs(I) + 2 * std::abs(J); }

namespace {

int sgn(int parity) { return parity & 1 ? -1 : 1; }

// sum over a,c of (-1)^{a+c} w(b) P
double tri(const Correlation& c, int x, int y, int z, const double* w)
{
    const auto& s = c.scenario();
    double e = 0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < s.bob.outputs; ++b)
            for (int cc = 0; cc < 2; ++cc) e += sgn(a + cc) * w[b] * c(x, y, z, a, b, cc);
    return e;
}

}  // namespace

IJValue ij(const Correlation& c)
{
    const auto& s = c.scenario();
    IJValue v;
    v.scenario = s.name();
    double I = 0, J = 0;
    if (s.is22()) {
        const double w[2] = {1, -1};
        for (int x = 0; x < 2; ++x)
            for (int z = 0; z < 2; ++z) {
                I += tri(c, x, 0, z, w);
                J += sgn(x + z) * tri(c, x, 1, z, w);
            }
    } else if (s.is14()) {
        const double w0[4] = {1, 1, -1, -1}, w1[4] = {1, -1, 1, -1};
        for (int x = 0; x < 2; ++x)
            for (int z = 0; z < 2; ++z) {
                I += tri(c, x, 0, z, w0);
                J += sgn(x + z) * tri(c, x, 0, z, w1);
            }
    } else if (s.is13()) {
        const double w0[3] = {1, 1, -1}, w1[3] = {1, -1, 0};
        for (int x = 0; x < 2; ++x)
            for (int z = 0; z < 2; ++z) {
                I += tri(c, x, 0, z, w0);
                J += sgn(x + z) * tri(c, x, 0, z, w1);
            }
    } else {
        throw DomainError("I and J are defined for the 22, 14 and 13 scenarios only");
    }
    v.I = I / 4;
    v.J = J / 4;
    return v;
}

BilocalTest bilocal_test(const IJValue& v, double tol)
{
    double val = v.biloc_lhs();
    return {val, val > 1 + tol};
}

double chsh_conditioned(const Correlation& c, int bobOutcome)
{
    const auto& s = c.scenario();
    if (s.alice.outputs != 2 || s.charlie.outputs != 2 || s.alice.inputs != 2 || s.charlie.inputs != 2 ||
        s.bob.inputs != 1)
        throw DomainError("chsh_conditioned expects a single-input Bob and binary Alice/Charlie");
    if (bobOutcome < 0 || bobOutcome >= s.bob.outputs) throw DomainError("Bob outcome out of range");
    double E[2][2];
    for (int x = 0; x < 2; ++x)
        for (int z = 0; z < 2; ++z) {
            double pb = 0, e = 0;
            for (int a = 0; a < 2; ++a)
                for (int cc = 0; cc < 2; ++cc) {
                    double p = c(x, 0, z, a, bobOutcome, cc);
                    pb += p;
                    e += sgn(a + cc) * p;
                }
            if (pb <= 1e-15) throw DomainError("Bob outcome has zero probability");
            E[x][z] = e / pb;
        }
    double total = E[0][0] + E[0][1] + E[1][0] + E[1][1], best = 0;
    for (int x = 0; x < 2; ++x)
        for (int z = 0; z < 2; ++z) best = std::max(best, std::abs(total - 2 * E[x][z]));
    return best;
}

LegacyValue legacy_inequality(const Correlation& c, double tol)
{
    if (!c.scenario().is14()) throw DomainError("legacy inequality is stated for the 14 scenario");
    IJValue v = ij(c);
    LegacyValue r{2 * v.I + 2 * v.J, 2 * v.I - 2 * v.J, false};
    r.satisfied = r.I_plus <= 1 + r.I_minus * r.I_minus / 4 + tol;
    return r;
}

TradeoffPoint tradeoff_front(double xi)
{
    if (!(xi >= 0 && xi <= 1)) throw DomainError("xi must lie in [0, 1]");
    double cx = std::cos(xi * M_PI / 4), sx = std::sin(xi * M_PI / 4);
    TradeoffPoint t;
    t.V_loc = 1 / (cx + sx);
    t.V_biloc = 1 / (1 + cx);
    t.I = (1 + cx) / 4;
    for (int i = 0; i < 2; ++i) t.theta[i] = (i ? -1 : 1) * M_PI / 4 - xi * M_PI / 8;
    t.setup.bob = BobMeasurement::full_bsm();
    for (int i = 0; i < 2; ++i) t.setup.alice[i] = {std::sin(t.theta[i]), 0, std::cos(t.theta[i])};
    t.setup.charlie = t.setup.alice;
    return t;
}

}  // namespace biloc
