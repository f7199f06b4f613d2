#pragma once

#include <boost/rational.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace biloc {

using Rational = boost::rational<std::int64_t>;

// Input was structurally wrong or a parameter left its domain. The CLI maps this to exit code 2.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PartySpec {
    int inputs = 1;
    int outputs = 1;
    bool operator==(const PartySpec&) const = default;
};

enum class Party { Alice, Bob, Charlie };

struct Scenario {
    PartySpec alice, bob, charlie;

    static Scenario s22() { return {{2, 2}, {2, 2}, {2, 2}}; }
    static Scenario s14() { return {{2, 2}, {1, 4}, {2, 2}}; }
    static Scenario s13() { return {{2, 2}, {1, 3}, {2, 2}}; }

    bool is22() const { return *this == s22(); }
    bool is14() const { return *this == s14(); }
    bool is13() const { return *this == s13(); }
    // "22", "14", "13" or "custom"
    std::string name() const;

    std::size_t size() const;
    bool operator==(const Scenario&) const = default;
};

// S13 Bob labels
inline constexpr int kB00 = 0;
inline constexpr int kB01 = 1;
inline constexpr int kBMerged = 2;

struct Index {
    int x = 0, y = 0, z = 0, a = 0, b = 0, c = 0;
};

// Conditional distribution P(a,b,c|x,y,z), flattened row-major over (x,y,z,a,b,c).
class Correlation {
public:
    Correlation() = default;
    Correlation(Scenario s, std::vector<double> p);
    explicit Correlation(Scenario s);

    const Scenario& scenario() const { return scen_; }
    const std::vector<double>& data() const { return p_; }
    std::vector<double>& data() { return p_; }

    std::size_t offset(int x, int y, int z, int a, int b, int c) const;
    std::size_t offset(const Index& i) const { return offset(i.x, i.y, i.z, i.a, i.b, i.c); }
    Index unflatten(std::size_t k) const;

    double operator()(int x, int y, int z, int a, int b, int c) const { return p_[offset(x, y, z, a, b, c)]; }
    double& operator()(int x, int y, int z, int a, int b, int c) { return p_[offset(x, y, z, a, b, c)]; }

    // exact mirror, same layout as data()
    const std::optional<std::vector<Rational>>& exact() const { return exact_; }
    void set_exact(std::vector<Rational> q);

    double max_abs_diff(const Correlation& o) const;

private:
    Scenario scen_;
    std::vector<double> p_;
    std::optional<std::vector<Rational>> exact_;
};

struct Violation {
    std::string what;  // "negative" or "normalization"
    Index where;
    double magnitude = 0;
};

// Throws DomainError on dimension mismatch.
std::vector<Violation> validate(const Correlation& c, double tol = 1e-12);
// Clamp entries in [-1e-15, 0) to zero.
void clamp_tiny_negatives(Correlation& c);

Correlation mix(const std::vector<Correlation>& cs, const std::vector<double>& w);

// Discarded parties become trivial (1 input, 1 output); their input is fixed to 0.
Correlation marginal(const Correlation& c, const std::vector<Party>& keep);

struct SignalingReport {
    bool non_signaling = true;
    double worst = 0;
};
SignalingReport is_non_signaling(const Correlation& c, double tol = 1e-9);

bool ac_product_check(const Correlation& c, double tol = 1e-9);
double ac_product_deviation(const Correlation& c);

Correlation map_14_to_22(const Correlation& c);
Correlation map_13_to_14(const Correlation& c);
Correlation depolarize_to_slice(const Correlation& c);

// Expectation of a ±1 product: parties with flag set contribute (-1)^{output}.
// For S14 Bob, bobMask selects bits of b = 2 b0 + b1 (mask 2 -> b0, 1 -> b1).
double correlator(const Correlation& c, int x, int y, int z, bool useA, int bobMask, bool useC);

}  // namespace biloc
