#include "biloc/trilocality.hpp"

#include "biloc/lp.hpp"
#include "biloc/quantum.hpp"
#include "biloc/scenario.hpp"

#include <algorithm>
#include <cmath>

namespace biloc {

BipartiteConditional four_to_conditional(const FourPartiteCorrelation& f)
{
    double total = 0;
    for (double v : f.p) {
        if (v < -1e-12) throw DomainError("negative entry in four-partite correlation");
        total += v;
    }
    if (std::abs(total - 1) > 1e-12) throw DomainError("four-partite correlation is not normalized");
    BipartiteConditional c;
    double pxy[2][2] = {};
    for (int x = 0; x < 2; ++x)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int y = 0; y < 2; ++y) pxy[x][y] += f(x, a, b, y);
    for (int i = 0; i < 2; ++i) {
        c.px[i] = pxy[i][0] + pxy[i][1];
        c.py[i] = pxy[0][i] + pxy[1][i];
    }
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            if (pxy[x][y] <= 1e-10) throw DomainError("P(x,y) must be strictly positive");
            if (std::abs(pxy[x][y] - c.px[x] * c.py[y]) > 1e-10)
                throw DomainError("P(x,y) does not factorize as P(x)P(y)");
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) c(a, b, x, y) = f(x, a, b, y) / (c.px[x] * c.py[y]);
        }
    return c;
}

double conditional_chsh(const BipartiteConditional& c)
{
    double E[2][2];
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) E[x][y] = c(0, 0, x, y) + c(1, 1, x, y) - c(0, 1, x, y) - c(1, 0, x, y);
    double best = 0;
    for (int s = 0; s < 4; ++s) {
        double v = 0;
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) v += (((x ^ (s >> 1)) & (y ^ (s & 1))) ? -1 : 1) * E[x][y];
        best = std::max(best, std::abs(v));
    }
    return best;
}

std::optional<BipartiteLocalModel> bipartite_local_model(const BipartiteConditional& c)
{
    LinearProgram lp(16);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    LinearProgram::Row r;
                    for (int sa = 0; sa < 4; ++sa)
                        for (int sb = 0; sb < 4; ++sb) {
                            int av = x == 0 ? sa >> 1 : sa & 1, bv = y == 0 ? sb >> 1 : sb & 1;
                            if (av == a && bv == b) r.push_back({sa * 4 + sb, 1.0});
                        }
                    lp.add_eq(std::move(r), c(a, b, x, y));
                }
    LpResult res = lp_solve(lp);
    if (res.status != LpStatus::Optimal) return std::nullopt;
    BipartiteLocalModel m;
    for (int k = 0; k < 16; ++k) m[k] = std::max(0.0, res.x[k]);
    return m;
}

FourPartiteCorrelation TrilocalDecomposition::reproduce() const
{
    FourPartiteCorrelation f;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int sa = 0; sa < 4; ++sa)
                for (int sb = 0; sb < 4; ++sb) {
                    int a = x == 0 ? sa >> 1 : sa & 1, b = y == 0 ? sb >> 1 : sb & 1;
                    f(x, a, b, y) += p1[x] * p[sa * 4 + sb] * p2[y];
                }
    return f;
}

TrilocalDecomposition conditional_to_four(const BipartiteConditional& c, const BipartiteLocalModel& model)
{
    TrilocalDecomposition d;
    d.p1 = c.px;
    d.p2 = c.py;
    d.p = model;
    return d;
}

FourPartiteCorrelation example_quantum_fourpartite()
{
    FourPartiteCorrelation f;
    for (int x = 0; x < 2; ++x)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int y = 0; y < 2; ++y) {
                    int s = (a + b + x * y) & 1 ? -1 : 1;
                    f(x, a, b, y) = (1 - s / std::sqrt(2.0)) / 16;
                }
    return f;
}

FourPartiteCorrelation example_quantum_fourpartite_kernel()
{
    using C = std::complex<double>;
    // qubit order X, A1, A2, B1, B2, Y
    CMatrix classical = CMatrix::Zero(4, 4);
    classical(0, 0) = classical(3, 3) = 0.5;
    Eigen::Vector4cd singlet(0, 1 / std::sqrt(2.0), -1 / std::sqrt(2.0), 0);
    CMatrix rhoS = singlet * singlet.adjoint();
    CMatrix rho = kron(kron(classical, rhoS), classical);

    CMatrix I2 = pauli('I'), Z = pauli('Z'), X = pauli('X');
    CMatrix P0 = (I2 + Z) / C(2), P1 = (I2 - Z) / C(2);
    CMatrix A = kron(P0, Z) + kron(P1, X);
    CMatrix B = kron((Z + X) / C(std::sqrt(2.0)), P0) + kron((Z - X) / C(std::sqrt(2.0)), P1);
    CMatrix I4 = CMatrix::Identity(4, 4);
    auto proj = [](const CMatrix& obs, int out, const CMatrix& id) {
        return ((id + (out ? -1.0 : 1.0) * obs) / C(2)).eval();
    };
    FourPartiteCorrelation f;
    for (int x = 0; x < 2; ++x)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int y = 0; y < 2; ++y) {
                    CMatrix op = kron(kron(kron(proj(Z, x, I2), proj(A, a, I4)), proj(B, b, I4)), proj(Z, y, I2));
                    f(x, a, b, y) = (op.transpose().cwiseProduct(rho)).sum().real();
                }
    return f;
}

}  // namespace biloc
