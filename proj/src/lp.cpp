#include "biloc/lp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace biloc {

int LinearProgram::add_var(double lo, double hi, double cost)
{
    c.push_back(cost);
    lb.push_back(lo);
    ub.push_back(hi);
    return n++;
}

void LinearProgram::add_ge(Row r, double b)
{
    for (auto& [j, v] : r) v = -v;
    add_le(std::move(r), -b);
}

std::string to_string(LpStatus s)
{
    switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::Failed: return "failed";
    }
    return "?";
}

namespace {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Standard form: min c.x, A x = b, x >= 0, b >= 0. Last row of the tableau holds reduced costs,
// last column the right-hand side.
class Tableau {
public:
    Tableau(Mat t, std::vector<int> basis, const LpOptions& o) : T(std::move(t)), basis(std::move(basis)), opt(o) {}

    // returns Optimal, Unbounded or Failed; columns >= ncols_active are never chosen
    LpStatus run(int ncols_active, int max_iter, int& iters)
    {
        const int m = int(T.rows()) - 1;
        int degenerate = 0;
        bool bland = false;
        while (true) {
            if (iters >= max_iter) return LpStatus::Failed;
            int pc = -1;
            double best = -opt.feas_tol;
            for (int j = 0; j < ncols_active; ++j) {
                double r = T(m, j);
                if (r < best) {
                    pc = j;
                    if (bland) break;
                    best = r;
                }
            }
            if (pc < 0) return LpStatus::Optimal;
            int pr = -1;
            double ratio = kInf, prow = 0;
            for (int i = 0; i < m; ++i) {
                double a = T(i, pc);
                if (a <= opt.pivot_tol) continue;
                double q = std::max(T(i, T.cols() - 1), 0.0) / a;
                bool take = false;
                if (q < ratio - 1e-12) take = true;
                else if (q <= ratio + 1e-12)
                    take = bland ? basis[i] < basis[pr] : a > prow;
                if (take) {
                    pr = i;
                    ratio = q;
                    prow = a;
                }
            }
            if (pr < 0) return LpStatus::Unbounded;
            if (ratio <= 1e-12) {
                if (++degenerate > 50) bland = true;
            } else {
                degenerate = 0;
                bland = false;
            }
            pivot(pr, pc);
            ++iters;
        }
    }

    void pivot(int pr, int pc)
    {
        Eigen::RowVectorXd row = T.row(pr) / T(pr, pc);
        for (int i = 0; i < T.rows(); ++i) {
            double f = T(i, pc);
            if (i == pr || f == 0) continue;
            T.row(i) -= f * row;
            T(i, pc) = 0;
        }
        T.row(pr) = row;
        T(pr, pc) = 1;
        basis[pr] = pc;
    }

    Mat T;
    std::vector<int> basis;
    LpOptions opt;
};

}  // namespace

LpResult lp_solve(const LinearProgram& lp, const LpOptions& opt)
{
    const int n = lp.n;
    if (int(lp.c.size()) != n || int(lp.lb.size()) != n || int(lp.ub.size()) != n || lp.A_ub.size() != lp.b_ub.size() ||
        lp.A_eq.size() != lp.b_eq.size())
        throw std::invalid_argument("linear program dimensions are inconsistent");

    // variable substitution x_j = shift_j + sign_j * y_j (+ second part for free variables)
    struct Map {
        double shift = 0, sign = 1;
        int col = -1, col2 = -1;
    };
    std::vector<Map> map(n);
    int ncol = 0;
    std::vector<std::pair<int, double>> extra_ub;  // (column, bound) rows y <= u - l
    for (int j = 0; j < n; ++j) {
        double l = lp.lb[j], u = lp.ub[j];
        if (l > u) {
            LpResult r;
            r.status = LpStatus::Infeasible;
            return r;
        }
        if (std::isfinite(l)) {
            map[j] = {l, 1, ncol++, -1};
            if (std::isfinite(u)) extra_ub.push_back({map[j].col, u - l});
        } else if (std::isfinite(u)) {
            map[j] = {u, -1, ncol++, -1};
        } else {
            map[j] = {0, 1, ncol, ncol + 1};
            ncol += 2;
        }
    }
    const int m_ub = int(lp.A_ub.size()) + int(extra_ub.size()), m_eq = int(lp.A_eq.size());
    const int m = m_ub + m_eq;
    const int nslack = m_ub;
    // columns: structural | slacks | artificials | rhs
    Mat A = Mat::Zero(m, ncol + nslack);
    Eigen::VectorXd b(m);
    auto fill = [&](int r, const LinearProgram::Row& row, double rhs) {
        double s = rhs;
        for (auto [j, v] : row) {
            const Map& mp = map.at(j);
            s -= v * mp.shift;
            A(r, mp.col) += v * mp.sign;
            if (mp.col2 >= 0) A(r, mp.col2) -= v;
        }
        b(r) = s;
    };
    int r = 0;
    for (std::size_t i = 0; i < lp.A_ub.size(); ++i, ++r) {
        fill(r, lp.A_ub[i], lp.b_ub[i]);
        A(r, ncol + r) = 1;
    }
    for (auto [col, bound] : extra_ub) {
        A(r, col) = 1;
        b(r) = bound;
        A(r, ncol + r) = 1;
        ++r;
    }
    for (std::size_t i = 0; i < lp.A_eq.size(); ++i, ++r) fill(r, lp.A_eq[i], lp.b_eq[i]);
    for (int i = 0; i < m; ++i)
        if (b(i) < 0) {
            A.row(i) *= -1;
            b(i) = -b(i);
        }

    // rows whose slack has +1 start with the slack basic; others get an artificial
    // (equality rows may also start from a structural column that appears in that row only)
    std::vector<int> art_rows;
    std::vector<int> basis(m, -1);
    std::vector<int> nnz(ncol, 0), last(ncol, -1);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < ncol; ++j)
            if (A(i, j) != 0) {
                ++nnz[j];
                last[j] = i;
            }
    std::vector<bool> used(ncol, false);
    for (int i = 0; i < m; ++i) {
        if (i < m_ub && A(i, ncol + i) > 0) {
            basis[i] = ncol + i;
            continue;
        }
        if (i >= m_ub) {
            for (int j = 0; j < ncol; ++j)
                if (!used[j] && nnz[j] == 1 && last[j] == i && A(i, j) > 0) {
                    double f = A(i, j);
                    A.row(i) /= f;
                    b(i) /= f;
                    used[j] = true;
                    basis[i] = j;
                    break;
                }
            if (basis[i] >= 0) continue;
        }
        art_rows.push_back(i);
    }
    const int nart = int(art_rows.size());
    const int nx = ncol + nslack;
    Mat T = Mat::Zero(m + 1, nx + nart + 1);
    T.block(0, 0, m, nx) = A;
    T.block(0, nx + nart, m, 1) = b;
    for (int k = 0; k < nart; ++k) {
        T(art_rows[k], nx + k) = 1;
        basis[art_rows[k]] = nx + k;
    }
    const int rhs = nx + nart;
    int max_iter = opt.max_iterations > 0 ? opt.max_iterations : 50 * (m + nx + nart) + 1000;
    int iters = 0;
    double bscale = m > 0 ? std::max(1.0, b.cwiseAbs().maxCoeff()) : 1.0;

    Tableau tab(std::move(T), basis, opt);
    LpResult res;
    if (nart > 0) {
        // phase 1: minimize the sum of artificials
        for (int k = 0; k < nart; ++k) tab.T.row(m) -= tab.T.row(art_rows[k]);
        for (int k = 0; k < nart; ++k) tab.T(m, nx + k) = 0;
        LpStatus st = tab.run(nx, max_iter, iters);
        if (st == LpStatus::Failed) {
            res.status = LpStatus::Failed;
            res.iterations = iters;
            return res;
        }
        if (-tab.T(m, rhs) > opt.feas_tol * bscale) {
            res.status = LpStatus::Infeasible;
            res.iterations = iters;
            return res;
        }
        // drive remaining artificials out of the basis, dropping redundant rows
        std::vector<int> keep;
        for (int i = 0; i < m; ++i) {
            if (tab.basis[i] < nx) {
                keep.push_back(i);
                continue;
            }
            int pc = -1;
            double best = 1e-9;
            for (int j = 0; j < nx; ++j)
                if (std::abs(tab.T(i, j)) > best) {
                    best = std::abs(tab.T(i, j));
                    pc = j;
                }
            if (pc >= 0) {
                tab.pivot(i, pc);
                keep.push_back(i);
            }
        }
        Mat T2(keep.size() + 1, nx + 1);
        std::vector<int> basis2;
        for (std::size_t k = 0; k < keep.size(); ++k) {
            T2.block(k, 0, 1, nx) = tab.T.block(keep[k], 0, 1, nx);
            T2(k, nx) = tab.T(keep[k], rhs);
            basis2.push_back(tab.basis[keep[k]]);
        }
        T2.row(keep.size()).setZero();
        tab = Tableau(std::move(T2), std::move(basis2), opt);
    } else {
        Mat T2(m + 1, nx + 1);
        T2.block(0, 0, m + 1, nx) = tab.T.block(0, 0, m + 1, nx);
        T2.col(nx) = tab.T.col(rhs);
        tab = Tableau(std::move(T2), tab.basis, opt);
    }

    // phase 2 objective in the substituted variables
    const int mm = int(tab.T.rows()) - 1;
    Eigen::RowVectorXd cost = Eigen::RowVectorXd::Zero(nx + 1);
    double c0 = 0, dir = lp.maximize ? -1 : 1;
    for (int j = 0; j < n; ++j) {
        double cj = dir * lp.c[j];
        c0 += cj * map[j].shift;
        cost(map[j].col) += cj * map[j].sign;
        if (map[j].col2 >= 0) cost(map[j].col2) -= cj;
    }
    tab.T.row(mm) = cost;
    for (int i = 0; i < mm; ++i) {
        double cb = tab.T(mm, tab.basis[i]);
        if (cb != 0) tab.T.row(mm) -= cb * tab.T.row(i);
    }
    LpStatus st = tab.run(nx, max_iter, iters);
    res.iterations = iters;
    if (st != LpStatus::Optimal) {
        res.status = st;
        return res;
    }
    Eigen::VectorXd y = Eigen::VectorXd::Zero(nx);
    for (int i = 0; i < mm; ++i) y(tab.basis[i]) = std::max(0.0, tab.T(i, nx));
    res.x.assign(n, 0.0);
    double obj = 0;
    for (int j = 0; j < n; ++j) {
        double v = map[j].shift + map[j].sign * y(map[j].col);
        if (map[j].col2 >= 0) v -= y(map[j].col2);
        res.x[j] = v;
        obj += lp.c[j] * v;
    }
    (void)c0;
    res.objective = obj;
    res.status = LpStatus::Optimal;
    return res;
}

}  // namespace biloc
