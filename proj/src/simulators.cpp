#include "biloc/simulators.hpp"

#include "biloc/util.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

namespace biloc {

namespace {

constexpr std::uint64_t kChunk = 1 << 16;

using Vec3 = std::array<double, 3>;

double dot(const Vec3& u, const Vec3& v) { return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]; }

Vec3 uniform_sphere(std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    while (true) {
        Vec3 v{g(rng), g(rng), g(rng)};
        double n = std::sqrt(dot(v, v));
        if (n > 1e-12) return {v[0] / n, v[1] / n, v[2] / n};
    }
}

// density |n.lambda| / (2 pi): uniform proposal accepted with probability |n.lambda|
Vec3 biased_sphere(std::mt19937_64& rng, const Vec3& n)
{
    std::uniform_real_distribution<double> U(0.0, 1.0);
    while (true) {
        Vec3 v = uniform_sphere(rng);
        if (U(rng) < std::abs(dot(v, n))) return v;
    }
}

// Bell-measurement statistics on |l1>|l2>: <B0> = z z, <B1> = x x, <B0 B1> = -y y
std::array<double, 4> bob_probs(const Vec3& l1, const Vec3& l2)
{
    double m0 = l1[2] * l2[2], m1 = l1[0] * l2[0], m01 = -l1[1] * l2[1];
    std::array<double, 4> p;
    for (int k = 0; k < 4; ++k) {
        int b0 = k & 2 ? -1 : 1, b1 = k & 1 ? -1 : 1;
        p[k] = std::max(0.0, 0.25 * (1 + b0 * m0 + b1 * m1 + b0 * b1 * m01));
    }
    return p;
}

int sign_bit(double v) { return v >= 0 ? 0 : 1; }

}  // namespace

Protocol protocol_from_string(const std::string& s)
{
    if (s == "werner") return Protocol::Werner;
    if (s == "comm2" || s == "two-bit") return Protocol::TwoBit;
    throw DomainError("unknown protocol: " + s);
}

std::string to_string(Protocol p) { return p == Protocol::Werner ? "werner" : "comm2"; }

Moment SimEstimate::get(bool useA, int bobMask, bool useC) const
{
    int mask = (useA ? 8 : 0) | ((bobMask & 2) ? 4 : 0) | ((bobMask & 1) ? 2 : 0) | (useC ? 1 : 0);
    std::int64_t diff = 0;
    for (int k = 0; k < 16; ++k) diff += (std::popcount(unsigned(k & mask)) & 1) ? -std::int64_t(counts[k]) : std::int64_t(counts[k]);
    Moment m;
    if (samples == 0) return m;
    double N = double(samples);
    m.mean = double(diff) / N;
    double var = samples > 1 ? std::max(0.0, 1 - m.mean * m.mean) * N / (N - 1) : 0;
    m.stderr_ = std::sqrt(var / N);
    return m;
}

SimEstimate simulate(Protocol p, const SimConfig& cfg)
{
    if (cfg.samples < 1) throw DomainError("samples must be at least 1");
    Vec3 a = bloch(cfg.a[0], cfg.a[1], cfg.a[2]), c = bloch(cfg.c[0], cfg.c[1], cfg.c[2]);
    const std::uint64_t nchunks = (cfg.samples + kChunk - 1) / kChunk;
    std::vector<std::array<std::uint64_t, 16>> partial(nchunks);
    const std::uint64_t base = splitmix64(cfg.seed);
    parallel_for(int(nchunks), [&](int ci) {
        std::mt19937_64 rng(splitmix64(base + std::uint64_t(ci)));
        std::uniform_real_distribution<double> U(0.0, 1.0);
        std::uint64_t n = std::min(kChunk, cfg.samples - std::uint64_t(ci) * kChunk);
        auto& cnt = partial[ci];
        cnt.fill(0);
        for (std::uint64_t s = 0; s < n; ++s) {
            Vec3 l1 = p == Protocol::Werner ? uniform_sphere(rng) : biased_sphere(rng, a);
            Vec3 l2 = p == Protocol::Werner ? uniform_sphere(rng) : biased_sphere(rng, c);
            auto pb = bob_probs(l1, l2);
            double u = U(rng), acc = 0;
            int b = 3;
            for (int k = 0; k < 4; ++k) {
                acc += pb[k];
                if (u < acc) {
                    b = k;
                    break;
                }
            }
            int idx = (sign_bit(dot(a, l1)) << 3) | (b << 1) | sign_bit(dot(c, l2));
            ++cnt[idx];
        }
    });
    SimEstimate est;
    est.samples = cfg.samples;
    for (auto& cnt : partial)
        for (int k = 0; k < 16; ++k) est.counts[k] += cnt[k];
    return est;
}

VisibilityEstimate estimate_visibility(const SimEstimate& est, const BlochVector& a, const BlochVector& c)
{
    const double q[3] = {a[2] * c[2], a[0] * c[0], -a[1] * c[1]};
    const Moment m[3] = {est.get(true, 2, true), est.get(true, 1, true), est.get(true, 3, true)};
    double qq = 0, qe = 0, var = 0;
    for (int i = 0; i < 3; ++i) {
        qq += q[i] * q[i];
        qe += q[i] * m[i].mean;
        var += q[i] * q[i] * m[i].stderr_ * m[i].stderr_;
    }
    if (qq < 1e-24) throw DomainError("undefined visibility: all quantum predictions vanish for these settings");
    return {qe / qq, std::sqrt(var) / qq};
}

Correlation empirical_bilocal_correlation(const std::array<BlochVector, 2>& aSettings,
                                          const std::array<BlochVector, 2>& cSettings, int n1, int n2,
                                          std::uint64_t seed)
{
    if (n1 < 1 || n2 < 1) throw DomainError("hidden-state counts must be positive");
    std::mt19937_64 rng(splitmix64(seed));
    std::vector<Vec3> L1(n1), L2(n2);
    for (auto& l : L1) l = uniform_sphere(rng);
    for (auto& l : L2) l = uniform_sphere(rng);
    Correlation P(Scenario::s14());
    const double w = 1.0 / (double(n1) * double(n2));
    for (const auto& l1 : L1)
        for (const auto& l2 : L2) {
            auto pb = bob_probs(l1, l2);
            double tot = pb[0] + pb[1] + pb[2] + pb[3];
            for (int x = 0; x < 2; ++x)
                for (int z = 0; z < 2; ++z) {
                    int av = sign_bit(dot(aSettings[x], l1)), cv = sign_bit(dot(cSettings[z], l2));
                    for (int b = 0; b < 4; ++b) P(x, 0, z, av, b, cv) += w * pb[b] / tot;
                }
        }
    return P;
}

}  // namespace biloc
