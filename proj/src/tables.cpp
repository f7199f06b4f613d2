#include "biloc/correlators.hpp"
#include "biloc/quantum.hpp"

#include "biloc/inequalities.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace biloc {

TableId table_from_string(const std::string& s)
{
    if (s == "I") return TableId::I;
    if (s == "II") return TableId::II;
    if (s == "III") return TableId::III;
    if (s == "IV") return TableId::IV;
    if (s == "V-local" || s == "Vl") return TableId::V_local;
    if (s == "V" || s == "V-bilocal" || s == "Vb") return TableId::V_bilocal;
    throw DomainError("unknown table '" + s + "' (expected I, II, III, IV, V-local, V-bilocal)");
}

std::string to_string(TableId t)
{
    switch (t) {
    case TableId::I: return "I";
    case TableId::II: return "II";
    case TableId::III: return "III";
    case TableId::IV: return "IV";
    case TableId::V_local: return "V-local";
    case TableId::V_bilocal: return "V-bilocal";
    }
    return "?";
}

namespace {

// strategy alpha = 2 alpha0 + alpha1; first-input output sign and type
int first_sign(int s) { return (s >> 1) ? -1 : 1; }
bool same_type(int s) { return (s >> 1) == (s & 1); }

template <class T>
T safe_div(const T& n, const T& d)
{
    return d == T(0) ? T(0) : n / d;
}

// Bob's four outcomes b = 2 b0 + b1 with <B^0> = m0, <B^1> = m1, <B^0 B^1> = m01.
template <class T>
std::array<T, 4> bob4(const T& m0, const T& m1, const T& m01)
{
    std::array<T, 4> p;
    for (int b = 0; b < 4; ++b) {
        int B0 = (b >> 1) ? -1 : 1, B1 = (b & 1) ? -1 : 1;
        p[b] = (T(1) + T(B0) * m0 + T(B1) * m1 + T(B0 * B1) * m01) / T(4);
    }
    return p;
}

template <class T>
WeightTableT<T> table_ij(Case kind, const T& I, const T& J, const T& K)
{
    WeightTableT<T> w(kind);
    T r = (T(1) + K) / T(2);
    T kI = safe_div(T(4) * I, (T(1) + K) * (T(1) + K));
    T kJ = safe_div(T(4) * J, (T(1) - K) * (T(1) - K));
    for (int a = 0; a < 4; ++a)
        for (int g = 0; g < 4; ++g) {
            T pa = same_type(a) ? r / T(2) : (T(1) - r) / T(2);
            T pg = same_type(g) ? r / T(2) : (T(1) - r) / T(2);
            T s(first_sign(a) * first_sign(g));
            T m0(0), m1(0);
            if (same_type(a) && same_type(g)) m0 = s * kI;
            if (!same_type(a) && !same_type(g)) m1 = s * kJ;
            auto bob = bob4(m0, m1, T(0));
            for (int b = 0; b < 4; ++b) w.at(a, b, g) = pa * pg * bob[b];
        }
    return w;
}

template <class T>
WeightTableT<T> table_13(const T& I, const T& J, const T& K, const T& L, const T& M)
{
    WeightTableT<T> w(Case::C13);
    T r = (T(1) + K) / T(2);
    T kI = safe_div(T(4) * I, (T(1) + K) * (T(1) + K));
    T dd = (T(1) - K) * (T(1) - K);
    T mu = dd == T(0) ? T(1) / T(2) : T(1) / T(2) - (L + M) / dd;
    T kJ = safe_div(T(4) * J, dd / T(2) + L + M);
    T mixed0 = safe_div(L - M, T(1) - K * K);
    for (int a = 0; a < 4; ++a)
        for (int g = 0; g < 4; ++g) {
            T pa = same_type(a) ? r / T(2) : (T(1) - r) / T(2);
            T pg = same_type(g) ? r / T(2) : (T(1) - r) / T(2);
            T s(first_sign(a) * first_sign(g));
            std::array<T, 3> bob;
            if (same_type(a) && same_type(g)) {
                T plus = (T(1) + s * kI) / T(2);
                bob = {plus / T(2), plus / T(2), T(1) - plus};
            } else if (!same_type(a) && !same_type(g)) {
                T zero = (T(1) + s * kJ) / T(2);
                bob = {(T(1) - mu) * zero, (T(1) - mu) * (T(1) - zero), mu};
            } else {
                bob = {(T(1) + mixed0) / T(4), (T(1) + mixed0) / T(4), (T(1) - mixed0) / T(2)};
            }
            for (int b = 0; b < 3; ++b) w.at(a, b, g) = pa * pg * bob[b];
        }
    return w;
}

template <class T>
T detection_e(const T& eta)
{
    if (eta * T(4) >= T(3)) return T(0);
    if (eta * T(3) >= T(2)) return T(3) - T(4) * eta;
    return T(2) * eta - T(1);
}

template <class T>
WeightTableT<T> table_detection(const T& eta, const T& V)
{
    WeightTableT<T> w(Case::C14);
    T e = detection_e(eta);
    T t = (T(1) + e) / T(4), p = (T(3) - T(2) * eta - e) / T(4), m = (T(2) * eta - T(1) - e) / T(4);
    // Alice: ++ and -- weight t, +- weight p (no-click a = x), -+ weight m
    std::array<T, 4> rho1{t, p, m, t};
    // Charlie: +- and -+ weight t, ++ weight p (no-click c = 0), -- weight m
    std::array<T, 4> rho2{p, t, t, m};
    T k = safe_div(T(2) * eta * eta * V, T(1) - e * e);
    T l = safe_div(T(-2) * k * (T(1) - eta), T(1) + e);
    for (int a = 0; a < 4; ++a)
        for (int g = 0; g < 4; ++g) {
            T A0(first_sign(a)), C0(first_sign(g));
            T m0(0), m1(0);
            bool aS = same_type(a), cS = same_type(g);
            if (aS && cS) m0 = k * A0 * C0;
            if (!aS && !cS) m1 = k * A0 * C0;
            if (aS && !cS) {
                m0 = l * A0;
                m1 = l * C0;
            }
            auto bob = bob4(m0, m1, T(0));
            for (int b = 0; b < 4; ++b) w.at(a, b, g) = rho1[a] * rho2[g] * bob[b];
        }
    return w;
}

WeightTable table_tradeoff(double xi, double V, bool local)
{
    WeightTable w(Case::C14);
    double c = std::cos(xi * M_PI / 4), s = std::sin(xi * M_PI / 4), h = c - s;
    double cd = std::cos(xi * M_PI / 8), sd = std::sin(xi * M_PI / 8);
    // type coefficients of cos(theta_x) and sin(theta_x) (times sqrt 2)
    auto u = [&](bool S) { return S ? cd : sd; };
    auto v = [&](bool S) { return S ? -sd : cd; };
    double pSame, kSame;
    if (local) {
        pSame = 0.25 + V * (1 + h) / 8;
        kSame = V * (1 - h) / 8;  // p_combo * <sigma0 sigma1>
    } else {
        pSame = 0.25;
        kSame = 0.25 * V * (1 - c);
    }
    for (int a = 0; a < 4; ++a)
        for (int g = 0; g < 4; ++g) {
            bool aS = same_type(a), cS = same_type(g);
            double pc = (aS == cS) ? pSame : 0.5 - pSame;  // combo probability
            double sgn = first_sign(a) * first_sign(g);
            double m0 = 0, m1 = 0, m01 = 0;
            if (pc > 0) {
                m0 = sgn * V * u(aS) * u(cS) / (2 * pc);
                m1 = sgn * V * v(aS) * v(cS) / (2 * pc);
                m01 = (aS == cS ? kSame : -kSame) / pc;
            }
            auto bob = bob4(m0, m1, m01);
            for (int b = 0; b < 4; ++b) w.at(a, b, g) = pc / 4 * bob[b];
        }
    return w;
}

}  // namespace

double detection_offset(double eta) { return detection_e(eta); }

double detection_vbiloc(double eta)
{
    double e = detection_e(eta);
    return eta <= 2.0 / 3.0 ? 1.0 : (1 - e * e) / (2 * eta * eta);
}

namespace {

void require(bool ok, const std::string& what)
{
    if (!ok) throw DomainError("parameters outside the validity domain: " + what);
}

}  // namespace

Correlation slice_point(Case k, double I, double J)
{
    if (k == Case::C13) return slice_point13(I, J, 0);
    Correlation out(scenario_of(k));
    for (std::size_t n = 0; n < out.data().size(); ++n) {
        Index i = out.unflatten(n);
        auto sg = [](int p) { return p & 1 ? -1.0 : 1.0; };
        if (k == Case::C22)
            out.data()[n] = (1 + (i.y == 0 ? I * sg(i.a + i.b + i.c) : J * sg(i.x + i.z + i.a + i.b + i.c))) / 8;
        else
            out.data()[n] = (1 + I * sg(i.a + i.c + (i.b >> 1)) + J * sg(i.x + i.z + i.a + i.c + (i.b & 1))) / 16;
    }
    return out;
}

Correlation slice_point13(double I, double J, double L)
{
    CorrelatorTable e(Case::C13);
    e.at(0, 0, 0) = 1;
    e.at(0, 1, 0) = L;
    for (int i : {1, 2})
        for (int k : {1, 2}) {
            e.at(i, 1, k) = I;
            e.at(i, 2, k) = ((i == 1) != (k == 1)) ? -J : J;
        }
    return correlation_from_correlators(e);
}

Correlation tradeoff_correlation(double xi, double V)
{
    auto tp = tradeoff_front(xi);
    CorrelatorTable e(Case::C14);
    e.at(0, 0, 0) = 1;
    for (int i : {1, 2})
        for (int k : {1, 2}) {
            double tx = tp.theta[i == 1], tz = tp.theta[k == 1];
            e.at(i, 2, k) = V * std::cos(tx) * std::cos(tz);
            e.at(i, 1, k) = V * std::sin(tx) * std::sin(tz);
        }
    return correlation_from_correlators(e);
}

WeightTableT<Rational> table_weights_exact(TableId id, const ExactTableParams& p)
{
    switch (id) {
    case TableId::I: return table_ij(Case::C22, p.I, p.J, p.K);
    case TableId::II: return table_ij(Case::C14, p.I, p.J, p.K);
    case TableId::III: return table_13(p.I, p.J, p.K, p.L, p.M);
    case TableId::IV: return table_detection(p.eta, p.V);
    default: throw DomainError("Table V involves trigonometric values and has no exact build");
    }
}

TableDecomposition table_decomposition(TableId id, const TableParams& p, bool enforce_domain)
{
    constexpr double tol = 1e-12;
    TableDecomposition d{id, p, {}, {}, {}, {}};
    auto chk = [&](bool ok, const std::string& what) {
        if (enforce_domain) require(ok, what);
    };
    switch (id) {
    case TableId::I:
    case TableId::II:
    case TableId::III: {
        double K = p.K.value_or(std::sqrt(std::abs(p.I)) - std::sqrt(std::abs(p.J)));
        d.derived["K"] = K;
        chk(std::abs(K) <= 1 + tol, "|K| <= 1");
        if (id != TableId::III) {
            chk(std::sqrt(std::abs(p.I)) + std::sqrt(std::abs(p.J)) <= 1 + tol, "sqrt|I| + sqrt|J| <= 1");
            chk(4 * std::abs(p.I) <= (1 + K) * (1 + K) + tol, "4|I| <= (1+K)^2");
            chk(4 * std::abs(p.J) <= (1 - K) * (1 - K) + tol, "4|J| <= (1-K)^2");
            Case k = id == TableId::I ? Case::C22 : Case::C14;
            d.q = table_ij<double>(k, p.I, p.J, K);
            d.target = slice_point(k, p.I, p.J);
        } else {
            double dd = (1 - K) * (1 - K);
            chk(std::abs(p.L + p.M) <= dd / 2 + tol, "|L+M| <= (1-K)^2/2");
            chk(std::abs(p.L - p.M) <= 1 - K * K + tol, "|L-M| <= 1-K^2");
            chk(4 * std::abs(p.I) <= (1 + K) * (1 + K) + tol, "4|I| <= (1+K)^2");
            chk(4 * std::abs(p.J) <= dd / 2 + p.L + p.M + tol, "4|J| <= (1-K)^2/2 + L + M");
            chk(dd / 2 + p.L + p.M <= dd + tol, "(1-K)^2/2 + L + M <= (1-K)^2");
            d.q = table_13<double>(p.I, p.J, K, p.L, p.M);
            d.target = slice_point13(p.I, p.J, p.L);
        }
        break;
    }
    case TableId::IV: {
        chk(p.eta >= 0 && p.eta <= 1, "0 <= eta <= 1");
        double vb = detection_vbiloc(p.eta);
        d.derived["e_eta"] = detection_e(p.eta);
        d.derived["V_biloc"] = vb;
        chk(p.V >= 0 && p.V <= vb + tol, "0 <= V <= V_biloc^eta");
        d.q = table_detection<double>(p.eta, p.V);
        {
            // affine in V, so extrapolating past V = 1 is well defined for the outside-domain probe
            Correlation hi = closed_form(ClosedForm::PQ14, 1.0), lo = closed_form(ClosedForm::PQ14, 0.0), pv(hi.scenario());
            for (std::size_t n = 0; n < pv.data().size(); ++n)
                pv.data()[n] = p.V * hi.data()[n] + (1 - p.V) * lo.data()[n];
            d.target = apply_detection_model(pv, std::clamp(p.eta, 0.0, 1.0), std::clamp(p.eta, 0.0, 1.0),
                                             NoClick::AOutputsX_COutputs0);
        }
        break;
    }
    case TableId::V_local:
    case TableId::V_bilocal: {
        chk(p.xi >= 0 && p.xi <= 1, "0 <= xi <= 1");
        auto tp = tradeoff_front(std::clamp(p.xi, 0.0, 1.0));
        d.derived["V_loc"] = tp.V_loc;
        d.derived["V_biloc"] = tp.V_biloc;
        double lim = id == TableId::V_local ? tp.V_loc : tp.V_biloc;
        chk(p.V >= 0 && p.V <= lim + tol, id == TableId::V_local ? "V <= 1/(c+s)" : "V <= 1/(1+c)");
        d.q = table_tradeoff(p.xi, p.V, id == TableId::V_local);
        d.target = tradeoff_correlation(p.xi, p.V);
        break;
    }
    }
    d.e = q_to_e(d.q);
    return d;
}

}  // namespace biloc
