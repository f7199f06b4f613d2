#pragma once

#include "biloc/quantum.hpp"
#include "biloc/scenario.hpp"

#include <array>
#include <string>

namespace biloc {

struct IJValue {
    std::string scenario;  // "22", "14", "13"
    double I = 0, J = 0;
    double biloc_lhs() const;   // sqrt|I| + sqrt|J|
    double local_lhs() const;   // |I| + |J|
    double local_lhs13() const; // |I| + 2|J|
};

IJValue ij(const Correlation& c);

struct BilocalTest {
    double value;
    bool violated;
};
BilocalTest bilocal_test(const IJValue& v, double tol = 1e-12);

// Largest of the four CHSH sign placements on P(a,c|x,z,b).
double chsh_conditioned(const Correlation& c, int bobOutcome);

struct LegacyValue {
    double I_plus, I_minus;
    bool satisfied;
};
LegacyValue legacy_inequality(const Correlation& c, double tol = 1e-12);

struct TradeoffPoint {
    double V_loc, V_biloc;
    std::array<double, 2> theta;
    QuantumSetup setup;  // singlets, full BSM, settings cos(theta) Z + sin(theta) X
    double I;            // predicted I = J
};
TradeoffPoint tradeoff_front(double xi);

}  // namespace biloc
