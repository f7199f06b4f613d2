#pragma once

#include "biloc/quantum.hpp"
#include "biloc/scenario.hpp"

#include <array>
#include <cstdint>

namespace biloc {

struct SimConfig {
    std::uint64_t samples = 1000000;
    std::uint64_t seed = 0;
    BlochVector a{0, 0, 1}, c{0, 0, 1};
};

struct Moment {
    double mean = 0, stderr_ = 0;
};

// Moments of every product of A, B^0, B^1, C (all +-1).
struct SimEstimate {
    std::uint64_t samples = 0;
    std::array<std::uint64_t, 16> counts{};  // index 8 [A=-1] + 4 [B0=-1] + 2 [B1=-1] + [C=-1]
    Moment get(bool useA, int bobMask, bool useC) const;  // bobMask: 2 -> B^0, 1 -> B^1
};

enum class Protocol { Werner, TwoBit };
Protocol protocol_from_string(const std::string& s);  // "werner" | "comm2"
std::string to_string(Protocol p);

SimEstimate simulate(Protocol p, const SimConfig& cfg);
inline SimEstimate simulate_werner_bilocal(const SimConfig& cfg) { return simulate(Protocol::Werner, cfg); }
inline SimEstimate simulate_two_bit_comm(const SimConfig& cfg) { return simulate(Protocol::TwoBit, cfg); }

struct VisibilityEstimate {
    double V_hat = 0, stderr_ = 0;
};
// Least squares against (a^Z c^Z, a^X c^X, -a^Y c^Y); DomainError when all predictions vanish.
VisibilityEstimate estimate_visibility(const SimEstimate& est, const BlochVector& a, const BlochVector& c);

// S14 correlation of the Werner-protocol model restricted to n1 x n2 sampled hidden states,
// with Bob's exact output probabilities: bilocal by construction.
Correlation empirical_bilocal_correlation(const std::array<BlochVector, 2>& aSettings,
                                          const std::array<BlochVector, 2>& cSettings, int n1, int n2,
                                          std::uint64_t seed);

}  // namespace biloc
