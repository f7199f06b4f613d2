#include "biloc/scenario.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace biloc {

std::string Scenario::name() const
{
    if (is22()) return "22";
    if (is14()) return "14";
    if (is13()) return "13";
    return "custom";
}

std::size_t Scenario::size() const
{
    for (const auto* p : {&alice, &bob, &charlie})
        if (p->inputs < 1 || p->outputs < 1) throw DomainError("party cardinalities must be >= 1");
    return std::size_t(alice.inputs) * bob.inputs * charlie.inputs * alice.outputs * bob.outputs * charlie.outputs;
}

Correlation::Correlation(Scenario s) : scen_(s), p_(s.size(), 0.0) {}

Correlation::Correlation(Scenario s, std::vector<double> p) : scen_(s), p_(std::move(p))
{
    if (p_.size() != scen_.size())
        throw DomainError("tensor has " + std::to_string(p_.size()) + " entries, scenario needs " +
                          std::to_string(scen_.size()));
}

std::size_t Correlation::offset(int x, int y, int z, int a, int b, int c) const
{
    const auto& s = scen_;
    std::size_t k = x;
    k = k * s.bob.inputs + y;
    k = k * s.charlie.inputs + z;
    k = k * s.alice.outputs + a;
    k = k * s.bob.outputs + b;
    k = k * s.charlie.outputs + c;
    return k;
}

Index Correlation::unflatten(std::size_t k) const
{
    const auto& s = scen_;
    Index i;
    i.c = int(k % s.charlie.outputs); k /= s.charlie.outputs;
    i.b = int(k % s.bob.outputs); k /= s.bob.outputs;
    i.a = int(k % s.alice.outputs); k /= s.alice.outputs;
    i.z = int(k % s.charlie.inputs); k /= s.charlie.inputs;
    i.y = int(k % s.bob.inputs); k /= s.bob.inputs;
    i.x = int(k);
    return i;
}

void Correlation::set_exact(std::vector<Rational> q)
{
    if (q.size() != p_.size()) throw DomainError("exact mirror size mismatch");
    exact_ = std::move(q);
}

double Correlation::max_abs_diff(const Correlation& o) const
{
    if (!(scen_ == o.scen_)) throw DomainError("scenario mismatch");
    double m = 0;
    for (std::size_t k = 0; k < p_.size(); ++k) m = std::max(m, std::abs(p_[k] - o.p_[k]));
    return m;
}

std::vector<Violation> validate(const Correlation& c, double tol)
{
    const auto& s = c.scenario();
    if (c.data().size() != s.size()) throw DomainError("tensor dimensions do not match scenario");
    std::vector<Violation> out;
    for (std::size_t k = 0; k < c.data().size(); ++k)
        if (c.data()[k] < -1e-15 || !std::isfinite(c.data()[k]))
            out.push_back({"negative", c.unflatten(k), c.data()[k]});
    for (int x = 0; x < s.alice.inputs; ++x)
        for (int y = 0; y < s.bob.inputs; ++y)
            for (int z = 0; z < s.charlie.inputs; ++z) {
                double sum = 0;
                for (int a = 0; a < s.alice.outputs; ++a)
                    for (int b = 0; b < s.bob.outputs; ++b)
                        for (int cc = 0; cc < s.charlie.outputs; ++cc) sum += c(x, y, z, a, b, cc);
                if (std::abs(sum - 1) > tol) out.push_back({"normalization", {x, y, z, 0, 0, 0}, sum - 1});
            }
    return out;
}

void clamp_tiny_negatives(Correlation& c)
{
    for (auto& v : c.data())
        if (v < 0 && v >= -1e-15) v = 0;
}

Correlation mix(const std::vector<Correlation>& cs, const std::vector<double>& w)
{
    if (cs.empty() || cs.size() != w.size()) throw DomainError("mix needs one weight per correlation");
    double sw = 0;
    for (double x : w) {
        if (x < 0) throw DomainError("mix weights must be nonnegative");
        sw += x;
    }
    if (std::abs(sw - 1) > 1e-12) throw DomainError("mix weights must sum to 1");
    Correlation out(cs[0].scenario());
    for (std::size_t i = 0; i < cs.size(); ++i) {
        if (!(cs[i].scenario() == out.scenario())) throw DomainError("mix needs a common scenario");
        for (std::size_t k = 0; k < out.data().size(); ++k) out.data()[k] += w[i] * cs[i].data()[k];
    }
    return out;
}

namespace {

bool keeps(const std::vector<Party>& keep, Party p) { return std::find(keep.begin(), keep.end(), p) != keep.end(); }

// Marginal with the discarded parties' inputs fixed to (x0,y0,z0).
Correlation marginal_at(const Correlation& c, bool kA, bool kB, bool kC, int x0, int y0, int z0)
{
    const auto& s = c.scenario();
    Scenario r{kA ? s.alice : PartySpec{1, 1}, kB ? s.bob : PartySpec{1, 1}, kC ? s.charlie : PartySpec{1, 1}};
    Correlation out(r);
    for (int x = 0; x < r.alice.inputs; ++x)
        for (int y = 0; y < r.bob.inputs; ++y)
            for (int z = 0; z < r.charlie.inputs; ++z) {
                int X = kA ? x : x0, Y = kB ? y : y0, Z = kC ? z : z0;
                for (int a = 0; a < s.alice.outputs; ++a)
                    for (int b = 0; b < s.bob.outputs; ++b)
                        for (int cc = 0; cc < s.charlie.outputs; ++cc)
                            out(x, y, z, kA ? a : 0, kB ? b : 0, kC ? cc : 0) += c(X, Y, Z, a, b, cc);
            }
    return out;
}

}  // namespace

Correlation marginal(const Correlation& c, const std::vector<Party>& keep)
{
    if (keep.empty()) throw DomainError("marginal needs at least one party");
    return marginal_at(c, keeps(keep, Party::Alice), keeps(keep, Party::Bob), keeps(keep, Party::Charlie), 0, 0, 0);
}

SignalingReport is_non_signaling(const Correlation& c, double tol)
{
    const auto& s = c.scenario();
    SignalingReport rep;
    for (int mask = 1; mask < 7; ++mask) {
        bool kA = mask & 1, kB = mask & 2, kC = mask & 4;
        Correlation ref = marginal_at(c, kA, kB, kC, 0, 0, 0);
        for (int x0 = 0; x0 < (kA ? 1 : s.alice.inputs); ++x0)
            for (int y0 = 0; y0 < (kB ? 1 : s.bob.inputs); ++y0)
                for (int z0 = 0; z0 < (kC ? 1 : s.charlie.inputs); ++z0)
                    rep.worst = std::max(rep.worst, ref.max_abs_diff(marginal_at(c, kA, kB, kC, x0, y0, z0)));
    }
    rep.non_signaling = rep.worst <= tol;
    return rep;
}

double ac_product_deviation(const Correlation& c)
{
    const auto& s = c.scenario();
    double worst = 0;
    for (int y = 0; y < s.bob.inputs; ++y)
        for (int x = 0; x < s.alice.inputs; ++x)
            for (int z = 0; z < s.charlie.inputs; ++z) {
                std::vector<double> joint(s.alice.outputs * s.charlie.outputs, 0.0);
                for (int a = 0; a < s.alice.outputs; ++a)
                    for (int b = 0; b < s.bob.outputs; ++b)
                        for (int cc = 0; cc < s.charlie.outputs; ++cc)
                            joint[a * s.charlie.outputs + cc] += c(x, y, z, a, b, cc);
                std::vector<double> pa(s.alice.outputs, 0.0), pc(s.charlie.outputs, 0.0);
                for (int a = 0; a < s.alice.outputs; ++a)
                    for (int cc = 0; cc < s.charlie.outputs; ++cc) {
                        pa[a] += joint[a * s.charlie.outputs + cc];
                        pc[cc] += joint[a * s.charlie.outputs + cc];
                    }
                for (int a = 0; a < s.alice.outputs; ++a)
                    for (int cc = 0; cc < s.charlie.outputs; ++cc)
                        worst = std::max(worst, std::abs(joint[a * s.charlie.outputs + cc] - pa[a] * pc[cc]));
            }
    return worst;
}

bool ac_product_check(const Correlation& c, double tol) { return ac_product_deviation(c) <= tol; }

Correlation map_14_to_22(const Correlation& c)
{
    if (!c.scenario().is14()) throw DomainError("map_14_to_22 expects an S14 correlation");
    Correlation out(Scenario::s22());
    for (int x = 0; x < 2; ++x)
        for (int z = 0; z < 2; ++z)
            for (int a = 0; a < 2; ++a)
                for (int cc = 0; cc < 2; ++cc)
                    for (int b = 0; b < 4; ++b) {
                        int bits[2] = {b >> 1, b & 1};
                        for (int y = 0; y < 2; ++y) out(x, y, z, a, bits[y], cc) += c(x, 0, z, a, b, cc);
                    }
    return out;
}

Correlation map_13_to_14(const Correlation& c)
{
    if (!c.scenario().is13()) throw DomainError("map_13_to_14 expects an S13 correlation");
    Correlation out(Scenario::s14());
    for (int x = 0; x < 2; ++x)
        for (int z = 0; z < 2; ++z)
            for (int a = 0; a < 2; ++a)
                for (int cc = 0; cc < 2; ++cc) {
                    out(x, 0, z, a, 0, cc) = c(x, 0, z, a, kB00, cc);
                    out(x, 0, z, a, 1, cc) = c(x, 0, z, a, kB01, cc);
                    out(x, 0, z, a, 2, cc) = 0.5 * c(x, 0, z, a, kBMerged, cc);
                    out(x, 0, z, a, 3, cc) = 0.5 * c(x, 0, z, a, kBMerged, cc);
                }
    return out;
}

Correlation depolarize_to_slice(const Correlation& c)
{
    if (!c.scenario().is14()) throw DomainError("depolarize_to_slice expects an S14 correlation");
    Correlation out(Scenario::s14());
    // g = (s1,s2,s3,s4): s1 flips a,b0,b1; s2 flips b0,b1,c; s3 flips x,b1; s4 flips z,b1
    for (int g = 0; g < 16; ++g) {
        int s1 = g & 1, s2 = (g >> 1) & 1, s3 = (g >> 2) & 1, s4 = (g >> 3) & 1;
        for (int x = 0; x < 2; ++x)
            for (int z = 0; z < 2; ++z)
                for (int a = 0; a < 2; ++a)
                    for (int b0 = 0; b0 < 2; ++b0)
                        for (int b1 = 0; b1 < 2; ++b1)
                            for (int cc = 0; cc < 2; ++cc) {
                                int b0s = b0 ^ s1 ^ s2, b1s = b1 ^ s1 ^ s2 ^ s3 ^ s4;
                                out(x, 0, z, a, 2 * b0 + b1, cc) +=
                                    c(x ^ s3, 0, z ^ s4, a ^ s1, 2 * b0s + b1s, cc ^ s2) / 16.0;
                            }
    }
    return out;
}

double correlator(const Correlation& c, int x, int y, int z, bool useA, int bobMask, bool useC)
{
    const auto& s = c.scenario();
    double e = 0;
    for (int a = 0; a < s.alice.outputs; ++a)
        for (int b = 0; b < s.bob.outputs; ++b)
            for (int cc = 0; cc < s.charlie.outputs; ++cc) {
                int parity = (useA ? a : 0) + std::popcount(unsigned(b & bobMask)) + (useC ? cc : 0);
                e += (parity & 1 ? -1.0 : 1.0) * c(x, y, z, a, b, cc);
            }
    return e;
}

}  // namespace biloc
