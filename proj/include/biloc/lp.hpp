#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace biloc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// minimize (or maximize) c.x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  lb <= x <= ub
struct LinearProgram {
    using Row = std::vector<std::pair<int, double>>;  // sparse (column, coefficient)

    int n = 0;
    std::vector<double> c;
    bool maximize = false;
    std::vector<Row> A_ub, A_eq;
    std::vector<double> b_ub, b_eq;
    std::vector<double> lb, ub;

    explicit LinearProgram(int nvars = 0) : n(nvars), c(nvars, 0.0), lb(nvars, 0.0), ub(nvars, kInf) {}
    int add_var(double lo = 0, double hi = kInf, double cost = 0);
    void add_le(Row r, double b) { A_ub.push_back(std::move(r)); b_ub.push_back(b); }
    void add_ge(Row r, double b);
    void add_eq(Row r, double b) { A_eq.push_back(std::move(r)); b_eq.push_back(b); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, Failed };
std::string to_string(LpStatus s);

struct LpResult {
    LpStatus status = LpStatus::Failed;
    std::vector<double> x;
    double objective = 0;
    int iterations = 0;
};

struct LpOptions {
    double feas_tol = 1e-9;
    double pivot_tol = 1e-11;
    int max_iterations = 0;  // 0: automatic
};

// Dense two-phase simplex; Dantzig pricing with a switch to Bland's rule on degenerate stalls.
LpResult lp_solve(const LinearProgram& lp, const LpOptions& opt = {});

}  // namespace biloc
