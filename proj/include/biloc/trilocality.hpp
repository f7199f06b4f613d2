#pragma once

#include <array>
#include <optional>

namespace biloc {

// P(x,a,b,y), all binary; index x*8 + a*4 + b*2 + y.
struct FourPartiteCorrelation {
    std::array<double, 16> p{};
    double& operator()(int x, int a, int b, int y) { return p[x * 8 + a * 4 + b * 2 + y]; }
    double operator()(int x, int a, int b, int y) const { return p[x * 8 + a * 4 + b * 2 + y]; }
};

// P(a,b|x,y) with P(x), P(y); index ((x*2 + y)*2 + a)*2 + b.
struct BipartiteConditional {
    std::array<double, 16> p{};
    std::array<double, 2> px{0.5, 0.5}, py{0.5, 0.5};
    double& operator()(int a, int b, int x, int y) { return p[((x * 2 + y) * 2 + a) * 2 + b]; }
    double operator()(int a, int b, int x, int y) const { return p[((x * 2 + y) * 2 + a) * 2 + b]; }
};

// Throws DomainError unless P(x,y) = P(x)P(y) > 0 within 1e-10.
BipartiteConditional four_to_conditional(const FourPartiteCorrelation& f);

// max over the four relabelings of |sum_{xy} (-1)^{xy} E_xy|
double conditional_chsh(const BipartiteConditional& c);

// Weights over deterministic strategies, index (2 a0 + a1) * 4 + (2 b0 + b1).
using BipartiteLocalModel = std::array<double, 16>;

// Local polytope membership by LP; nullopt if not local.
std::optional<BipartiteLocalModel> bipartite_local_model(const BipartiteConditional& c);

// lambda1 copies x, lambda2 copies y, lambda picks a deterministic strategy.
struct TrilocalDecomposition {
    std::array<double, 2> p1{}, p2{};
    BipartiteLocalModel p{};
    FourPartiteCorrelation reproduce() const;
};

TrilocalDecomposition conditional_to_four(const BipartiteConditional& c, const BipartiteLocalModel& model);

// 1/16 [1 - (-1)^{a+b+xy} / sqrt 2]
FourPartiteCorrelation example_quantum_fourpartite();
// Same tensor from the six-qubit state (classically correlated side sources, singlet in the middle).
FourPartiteCorrelation example_quantum_fourpartite_kernel();

}  // namespace biloc
