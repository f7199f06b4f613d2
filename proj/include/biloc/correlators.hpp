#pragma once

#include "biloc/scenario.hpp"

#include <bit>
#include <map>
#include <string>
#include <vector>

namespace biloc {

enum class Case { C22, C14, C13 };

Case case_of(const Scenario& s);
Scenario scenario_of(Case k);
std::string to_string(Case k);
Case case_from_string(const std::string& s);
inline int bob_strategies(Case k) { return k == Case::C13 ? 3 : 4; }

// q over (alpha, beta, gamma), alpha = 2 alpha0 + alpha1, same packing for beta (22/14) and gamma.
template <class T>
struct WeightTableT {
    Case kind = Case::C14;
    std::vector<T> q;

    WeightTableT() = default;
    explicit WeightTableT(Case k) : kind(k), q(16 * bob_strategies(k), T(0)) {}
    int nb() const { return bob_strategies(kind); }
    T& at(int a, int b, int g) { return q[(a * nb() + b) * 4 + g]; }
    const T& at(int a, int b, int g) const { return q[(a * nb() + b) * 4 + g]; }
};

// e over (i, j, k); j in 0..3 (22/14, packed like beta) or 0..2 (13).
template <class T>
struct CorrelatorTableT {
    Case kind = Case::C14;
    std::vector<T> e;
    std::vector<bool> fixed;

    CorrelatorTableT() = default;
    explicit CorrelatorTableT(Case k);
    int nj() const { return bob_strategies(kind); }
    T& at(int i, int j, int k) { return e[(i * nj() + j) * 4 + k]; }
    const T& at(int i, int j, int k) const { return e[(i * nj() + j) * 4 + k]; }
};

using WeightTable = WeightTableT<double>;
using CorrelatorTable = CorrelatorTableT<double>;

// Whether e_{ijk} is observable from P in this scenario.
bool is_fixed(Case k, int i, int j, int kk);

namespace detail {

inline int par(int a, int i) { return std::popcount(unsigned(a & i)) & 1; }

// sign of Bob strategy beta in correlator j; for the 13 case: j=0 all +1, j=1 (+,+,-), j=2 (+,-,0)
inline int bob_sign(Case k, int beta, int j)
{
    if (k != Case::C13) return par(beta, j) ? -1 : 1;
    static const int w[3][3] = {{1, 1, 1}, {1, 1, -1}, {1, -1, 0}};
    return w[j][beta];
}

// inverse weights: q_beta = 2^-6 sum_j u[beta][j] (...)
inline int bob_inverse(Case k, int beta, int j)
{
    if (k != Case::C13) return par(beta, j) ? -1 : 1;
    static const int u[3][3] = {{1, 1, 2}, {1, 1, -2}, {2, -2, 0}};
    return u[beta][j];
}

}  // namespace detail

template <class T>
CorrelatorTableT<T>::CorrelatorTableT(Case k) : kind(k), e(16 * bob_strategies(k), T(0)), fixed(e.size(), false)
{
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < nj(); ++j)
            for (int kk = 0; kk < 4; ++kk) fixed[(i * nj() + j) * 4 + kk] = is_fixed(k, i, j, kk);
}

template <class T>
CorrelatorTableT<T> q_to_e(const WeightTableT<T>& w)
{
    CorrelatorTableT<T> out(w.kind);
    const int nb = w.nb();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < nb; ++j)
            for (int k = 0; k < 4; ++k) {
                T s(0);
                for (int a = 0; a < 4; ++a)
                    for (int b = 0; b < nb; ++b) {
                        int sb = detail::bob_sign(w.kind, b, j);
                        if (sb == 0) continue;
                        for (int g = 0; g < 4; ++g) {
                            int sgn = sb * ((detail::par(a, i) ^ detail::par(g, k)) ? -1 : 1);
                            s += sgn > 0 ? w.at(a, b, g) : -w.at(a, b, g);
                        }
                    }
                out.at(i, j, k) = s;
            }
    return out;
}

template <class T>
WeightTableT<T> e_to_q(const CorrelatorTableT<T>& e)
{
    WeightTableT<T> out(e.kind);
    const int nb = e.nj();
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < nb; ++b)
            for (int g = 0; g < 4; ++g) {
                T s(0);
                for (int i = 0; i < 4; ++i)
                    for (int j = 0; j < nb; ++j) {
                        int u = detail::bob_inverse(e.kind, b, j);
                        if (u == 0) continue;
                        for (int k = 0; k < 4; ++k) {
                            int sgn = (detail::par(a, i) ^ detail::par(g, k)) ? -u : u;
                            s += T(sgn) * e.at(i, j, k);
                        }
                    }
                out.at(a, b, g) = s / T(64);
            }
    return out;
}

// P(a,b,c|x,y,z) = sum q delta(a = alpha_x) delta(b = beta_y or beta) delta(c = gamma_z)
template <class T>
std::vector<T> correlation_entries(const WeightTableT<T>& w)
{
    Scenario sc = scenario_of(w.kind);
    Correlation shape(sc);
    std::vector<T> p(sc.size(), T(0));
    const int nb = w.nb();
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < nb; ++b)
            for (int g = 0; g < 4; ++g) {
                const T& q = w.at(a, b, g);
                for (int x = 0; x < 2; ++x)
                    for (int y = 0; y < sc.bob.inputs; ++y)
                        for (int z = 0; z < 2; ++z) {
                            int ax = x == 0 ? a >> 1 : a & 1;
                            int cz = z == 0 ? g >> 1 : g & 1;
                            int bo = w.kind == Case::C22 ? (y == 0 ? b >> 1 : b & 1) : b;
                            p[shape.offset(x, y, z, ax, bo, cz)] += q;
                        }
            }
    return p;
}

Correlation correlation_from_weights(const WeightTable& w);
Correlation correlation_from_weights(const WeightTableT<Rational>& w);

// Correlation determined by the fixed entries only (free entries are ignored).
Correlation correlation_from_correlators(const CorrelatorTable& e);

CorrelatorTable fixed_correlators_from_P(const Correlation& c);

struct ConstraintReport {
    bool nonneg_ok = true, biloc_ok = true;
    double worst_negative = 0;  // most negative reconstructed weight (0 if none)
    double worst_biloc = 0;     // largest |e_{i0k} - e_{i00} e_{00k}|
};
ConstraintReport check_constraints(const CorrelatorTable& e, double tol = 1e-10);
ConstraintReport check_constraints(const CorrelatorTableT<Rational>& e);

WeightTable random_weights(Case k, std::uint64_t seed);

// ---- explicit decompositions ----

enum class TableId { I, II, III, IV, V_local, V_bilocal };
TableId table_from_string(const std::string& s);  // "I","II","III","IV","V-local","V-bilocal"
std::string to_string(TableId t);

struct TableParams {
    double I = 0, J = 0;
    std::optional<double> K;  // Tables I-III; defaults to sqrt|I| - sqrt|J|
    double L = 0, M = 0;      // Table III
    double eta = 1, V = 0;    // Tables IV, V
    double xi = 0;            // Table V
};

struct TableDecomposition {
    TableId id;
    TableParams params;
    std::map<std::string, double> derived;  // e.g. K, e_eta, V_biloc
    WeightTable q;
    CorrelatorTable e;
    Correlation target;
};

// Throws DomainError naming the violated inequality unless enforce_domain is false.
TableDecomposition table_decomposition(TableId id, const TableParams& p, bool enforce_domain = true);

// Exact rational builds where the parameters are rational (Tables I-IV).
struct ExactTableParams {
    Rational I{0}, J{0}, K{0}, L{0}, M{0}, eta{1}, V{0};
};
WeightTableT<Rational> table_weights_exact(TableId id, const ExactTableParams& p);

// Detection strategy: offset e_eta of the three regimes and the resulting bilocal visibility.
double detection_offset(double eta);
double detection_vbiloc(double eta);

// Slice point for Tables I/II: 22 -> 1/8[1 + d_{y0} I (-1)^{a+b+c} + d_{y1} J (-1)^{x+z+a+b+c}], 14 likewise.
Correlation slice_point(Case k, double I, double J);
// Table III target: <A_x B^0 C_z> = I, restricted <A_x B^1 C_z> = (-1)^{x+z} J, <B^0> = L.
Correlation slice_point13(double I, double J, double L);
// Table V target: singlets with the trade-off settings at visibility V.
Correlation tradeoff_correlation(double xi, double V);

}  // namespace biloc
