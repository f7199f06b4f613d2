#pragma once

#include "biloc/scenario.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace biloc {

using CMatrix = Eigen::MatrixXcd;
using BlochVector = std::array<double, 3>;  // (x, y, z)

BlochVector bloch(double x, double y, double z);  // throws unless unit norm within 1e-12
BlochVector bloch_normalized(double x, double y, double z);

CMatrix pauli(char which);  // 'I','X','Y','Z'
CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix pauli_string(const std::string& s);  // e.g. "ZZ"

// Projectors onto the +1 and -1 eigenspaces of n.sigma (outcome 0 <-> +1).
std::pair<CMatrix, CMatrix> bloch_projectors(const BlochVector& n);

enum class BobKind { FullBSM, PairwiseGrouping, PartialBSM3 };

struct BobMeasurement {
    BobKind kind = BobKind::FullBSM;
    // projectors[y][b], each 4x4 on (Bob-left, Bob-right)
    std::vector<std::vector<CMatrix>> projectors;
    std::vector<std::string> labels;

    static BobMeasurement full_bsm();
    static BobMeasurement pairwise(const CMatrix& obs0, const CMatrix& obs1);
    static BobMeasurement pairwise_zz_xx() { return pairwise(pauli_string("ZZ"), pauli_string("XX")); }
    static BobMeasurement partial_bsm3();

    PartySpec spec() const;
};

// Bell states in order Phi+, Phi-, Psi+, Psi-.
std::array<Eigen::Vector4cd, 4> bell_states();

struct SourceState {
    CMatrix rho;  // 4x4
    double theta = 0;
    double v = 1;
};

SourceState source_state(double theta, double v);

struct StateCheck {
    double hermitian_dev, trace_dev, min_eigenvalue;
};
StateCheck check_state(const CMatrix& rho);

Correlation generate_correlation(const SourceState& s1, const SourceState& s2,
                                 const std::array<BlochVector, 2>& aSettings, const BobMeasurement& bob,
                                 const std::array<BlochVector, 2>& cSettings);

enum class ClosedForm { PQ14, PQ22, PQ13, P0_14, P0_22, P0_13 };
ClosedForm closed_form_from_string(const std::string& s);
std::string to_string(ClosedForm k);

// V P + (1-V) P0; carries an exact mirror.
Correlation closed_form(ClosedForm kind, const Rational& V);
Correlation closed_form(ClosedForm kind, double V);

// The settings each closed form is generated by in the quantum kernel.
struct QuantumSetup {
    double theta1 = M_PI / 2, theta2 = M_PI / 2, v1 = 1, v2 = 1;
    BobMeasurement bob = BobMeasurement::full_bsm();
    std::array<BlochVector, 2> alice{}, charlie{};
};
QuantumSetup standard_setup(ClosedForm kind);
Correlation generate_correlation(const QuantumSetup& q);

// Settings (sigma_Z +- sqrt(s) sigma_X)/sqrt(1+s), s = sin(theta1) sin(theta2).
struct NonMaxEntSetup {
    QuantumSetup setup;
    double s, I, J;
    bool flagged;  // a source is a product state, no violation possible
};
NonMaxEntSetup nonmaxent_setup(double theta1, double theta2);

enum class NoClick { RandomOutput, AOutputsX_COutputs0 };
Correlation apply_detection_model(const Correlation& c, double etaA, double etaC, NoClick strategy);

// PQ14(V) seen through detectors of efficiency eta with the a=x, c=0 substitution.
Correlation detection_family(double eta, double V);

}  // namespace biloc
