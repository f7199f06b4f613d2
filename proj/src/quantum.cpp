#include "biloc/quantum.hpp"

#include <cmath>

namespace biloc {

using cd = std::complex<double>;

BlochVector bloch(double x, double y, double z)
{
    double n = std::sqrt(x * x + y * y + z * z);
    if (std::abs(n - 1) > 1e-12) throw DomainError("Bloch vector must have unit norm");
    return {x, y, z};
}

BlochVector bloch_normalized(double x, double y, double z)
{
    double n = std::sqrt(x * x + y * y + z * z);
    if (n == 0) throw DomainError("zero Bloch vector");
    return {x / n, y / n, z / n};
}

CMatrix pauli(char which)
{
    CMatrix m(2, 2);
    switch (which) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cd(0, -1), cd(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw DomainError(std::string("unknown Pauli ") + which);
    }
    return m;
}

CMatrix kron(const CMatrix& a, const CMatrix& b)
{
    CMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return r;
}

CMatrix pauli_string(const std::string& s)
{
    if (s.empty()) throw DomainError("empty Pauli string");
    CMatrix r = pauli(s[0]);
    for (std::size_t i = 1; i < s.size(); ++i) r = kron(r, pauli(s[i]));
    return r;
}

std::pair<CMatrix, CMatrix> bloch_projectors(const BlochVector& n)
{
    bloch(n[0], n[1], n[2]);
    CMatrix ns = n[0] * pauli('X') + n[1] * pauli('Y') + n[2] * pauli('Z');
    CMatrix id = CMatrix::Identity(2, 2);
    return {(id + ns) / 2.0, (id - ns) / 2.0};
}

std::array<Eigen::Vector4cd, 4> bell_states()
{
    const double r = 1 / std::sqrt(2.0);
    std::array<Eigen::Vector4cd, 4> s;
    s[0] << r, 0, 0, r;
    s[1] << r, 0, 0, -r;
    s[2] << 0, r, r, 0;
    s[3] << 0, r, -r, 0;
    return s;
}

BobMeasurement BobMeasurement::full_bsm()
{
    BobMeasurement m;
    m.kind = BobKind::FullBSM;
    m.projectors.resize(1);
    for (const auto& v : bell_states()) m.projectors[0].push_back(v * v.adjoint());
    m.labels = {"00", "01", "10", "11"};
    return m;
}

BobMeasurement BobMeasurement::pairwise(const CMatrix& obs0, const CMatrix& obs1)
{
    BobMeasurement m;
    m.kind = BobKind::PairwiseGrouping;
    CMatrix id = CMatrix::Identity(4, 4);
    for (const auto* o : {&obs0, &obs1}) {
        if (o->rows() != 4 || o->cols() != 4) throw DomainError("pairwise observables must be 4x4");
        if (((*o) * (*o) - id).norm() > 1e-10 || ((*o) - o->adjoint()).norm() > 1e-10)
            throw DomainError("pairwise observables must be Hermitian with eigenvalues +-1");
        m.projectors.push_back({(id + *o) / 2.0, (id - *o) / 2.0});
    }
    m.labels = {"0", "1"};
    return m;
}

BobMeasurement BobMeasurement::partial_bsm3()
{
    BobMeasurement m;
    m.kind = BobKind::PartialBSM3;
    auto b = bell_states();
    m.projectors.resize(1);
    m.projectors[0].push_back(b[0] * b[0].adjoint());
    m.projectors[0].push_back(b[1] * b[1].adjoint());
    m.projectors[0].push_back(b[2] * b[2].adjoint() + b[3] * b[3].adjoint());
    m.labels = {"00", "01", "10or11"};
    return m;
}

PartySpec BobMeasurement::spec() const { return {int(projectors.size()), int(projectors.at(0).size())}; }

SourceState source_state(double theta, double v)
{
    if (!(theta >= 0 && theta <= M_PI / 2 + 1e-15)) throw DomainError("theta must lie in [0, pi/2]");
    if (!(v >= 0 && v <= 1)) throw DomainError("visibility must lie in [0, 1]");
    Eigen::Vector4cd psi;
    psi << 0, std::cos(theta / 2), -std::sin(theta / 2), 0;
    SourceState s;
    s.rho = v * (psi * psi.adjoint()) + (1 - v) * CMatrix::Identity(4, 4) / 4.0;
    s.theta = theta;
    s.v = v;
    return s;
}

StateCheck check_state(const CMatrix& rho)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
    return {(rho - rho.adjoint()).cwiseAbs().maxCoeff(), std::abs(rho.trace() - cd(1, 0)),
            es.eigenvalues().minCoeff()};
}

Correlation generate_correlation(const SourceState& s1, const SourceState& s2,
                                 const std::array<BlochVector, 2>& aSettings, const BobMeasurement& bob,
                                 const std::array<BlochVector, 2>& cSettings)
{
    if (s1.rho.rows() != 4 || s2.rho.rows() != 4) throw DomainError("source states must be 4x4");
    Scenario sc{{2, 2}, bob.spec(), {2, 2}};
    Correlation out(sc);
    CMatrix rho = kron(s1.rho, s2.rho);
    std::array<std::array<CMatrix, 2>, 2> pa, pc;
    for (int x = 0; x < 2; ++x) {
        auto [p, m] = bloch_projectors(aSettings[x]);
        pa[x] = {p, m};
        auto [q, n] = bloch_projectors(cSettings[x]);
        pc[x] = {q, n};
    }
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < sc.bob.inputs; ++y)
            for (int z = 0; z < 2; ++z)
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < sc.bob.outputs; ++b)
                        for (int c = 0; c < 2; ++c) {
                            CMatrix op = kron(kron(pa[x][a], bob.projectors[y][b]), pc[z][c]);
                            // Tr(op rho) without forming the product
                            cd t = (op.transpose().cwiseProduct(rho)).sum();
                            out(x, y, z, a, b, c) = t.real();
                        }
    clamp_tiny_negatives(out);
    return out;
}

ClosedForm closed_form_from_string(const std::string& s)
{
    if (s == "pq14") return ClosedForm::PQ14;
    if (s == "pq22") return ClosedForm::PQ22;
    if (s == "pq13") return ClosedForm::PQ13;
    if (s == "p0-14") return ClosedForm::P0_14;
    if (s == "p0-22") return ClosedForm::P0_22;
    if (s == "p0-13") return ClosedForm::P0_13;
    throw DomainError("unknown closed form '" + s + "'");
}

std::string to_string(ClosedForm k)
{
    switch (k) {
    case ClosedForm::PQ14: return "pq14";
    case ClosedForm::PQ22: return "pq22";
    case ClosedForm::PQ13: return "pq13";
    case ClosedForm::P0_14: return "p0-14";
    case ClosedForm::P0_22: return "p0-22";
    case ClosedForm::P0_13: return "p0-13";
    }
    return "?";
}

namespace {

int sgn(int parity) { return parity & 1 ? -1 : 1; }

}  // namespace

Correlation closed_form(ClosedForm kind, const Rational& V)
{
    if (V < 0 || V > 1) throw DomainError("visibility must lie in [0, 1]");
    Rational v = V;
    Scenario sc;
    switch (kind) {
    case ClosedForm::P0_14: v = 0; [[fallthrough]];
    case ClosedForm::PQ14: sc = Scenario::s14(); break;
    case ClosedForm::P0_22: v = 0; [[fallthrough]];
    case ClosedForm::PQ22: sc = Scenario::s22(); break;
    case ClosedForm::P0_13: v = 0; [[fallthrough]];
    case ClosedForm::PQ13: sc = Scenario::s13(); break;
    }
    Correlation out(sc);
    std::vector<Rational> ex(out.data().size());
    for (std::size_t k = 0; k < ex.size(); ++k) {
        Index i = out.unflatten(k);
        Rational p;
        if (sc.is14()) {
            int b0 = i.b >> 1, b1 = i.b & 1;
            p = Rational(1, 16) *
                (1 + v * sgn(i.a + i.c) * Rational(sgn(b0) + sgn(i.x + i.z + b1), 2));
        } else if (sc.is22()) {
            p = Rational(1, 8) * (1 + v * Rational(sgn(i.a + i.b + i.c + i.x * i.y + i.y * i.z), 2));
        } else if (i.b == kBMerged) {
            p = Rational(1, 8) * (1 - v * Rational(2, 3) * sgn(i.a + i.c));
        } else {
            int b1 = i.b;  // 00 -> 0, 01 -> 1
            p = Rational(1, 16) * (1 + v * sgn(i.a + i.c) * Rational(2 + sgn(i.x + i.z + b1), 3));
        }
        ex[k] = p;
        out.data()[k] = boost::rational_cast<double>(p);
    }
    out.set_exact(std::move(ex));
    return out;
}

Correlation closed_form(ClosedForm kind, double V)
{
    if (!(V >= 0 && V <= 1)) throw DomainError("visibility must lie in [0, 1]");
    Correlation hi = closed_form(kind, Rational(1));
    Correlation lo = closed_form(kind, Rational(0));
    Correlation out(hi.scenario());
    for (std::size_t k = 0; k < out.data().size(); ++k) out.data()[k] = V * hi.data()[k] + (1 - V) * lo.data()[k];
    return out;
}

QuantumSetup standard_setup(ClosedForm kind)
{
    QuantumSetup q;
    const double r = 1 / std::sqrt(2.0);
    q.alice = {BlochVector{r, 0, r}, BlochVector{-r, 0, r}};
    switch (kind) {
    case ClosedForm::PQ14: case ClosedForm::P0_14: q.bob = BobMeasurement::full_bsm(); break;
    case ClosedForm::PQ22: case ClosedForm::P0_22: q.bob = BobMeasurement::pairwise_zz_xx(); break;
    case ClosedForm::PQ13: case ClosedForm::P0_13: {
        q.bob = BobMeasurement::partial_bsm3();
        double z = std::sqrt(2.0 / 3.0), x = std::sqrt(1.0 / 3.0);
        q.alice = {BlochVector{x, 0, z}, BlochVector{-x, 0, z}};
        break;
    }
    }
    if (kind == ClosedForm::P0_14 || kind == ClosedForm::P0_22 || kind == ClosedForm::P0_13) q.v1 = q.v2 = 0;
    q.charlie = q.alice;
    return q;
}

Correlation generate_correlation(const QuantumSetup& q)
{
    return generate_correlation(source_state(q.theta1, q.v1), source_state(q.theta2, q.v2), q.alice, q.bob,
                                q.charlie);
}

NonMaxEntSetup nonmaxent_setup(double theta1, double theta2)
{
    for (double t : {theta1, theta2})
        if (!(t >= 0 && t <= M_PI / 2 + 1e-15)) throw DomainError("theta must lie in [0, pi/2]");
    NonMaxEntSetup r;
    r.s = std::sin(theta1) * std::sin(theta2);
    r.I = 1 / (1 + r.s);
    r.J = r.s * r.s / (1 + r.s);
    r.flagged = theta1 == 0 || theta2 == 0;
    double n = std::sqrt(1 + r.s), x = std::sqrt(r.s) / n, z = 1 / n;
    r.setup.theta1 = theta1;
    r.setup.theta2 = theta2;
    r.setup.bob = BobMeasurement::full_bsm();
    r.setup.alice = {BlochVector{x, 0, z}, BlochVector{-x, 0, z}};
    r.setup.charlie = r.setup.alice;
    return r;
}

Correlation apply_detection_model(const Correlation& c, double etaA, double etaC, NoClick strategy)
{
    const auto& s = c.scenario();
    if (!(etaA >= 0 && etaA <= 1 && etaC >= 0 && etaC <= 1)) throw DomainError("efficiency must lie in [0, 1]");
    if (s.alice.outputs != 2 || s.charlie.outputs != 2) throw DomainError("detection model needs binary Alice and Charlie");
    // no-click substitution distributions D(out|in)
    auto subA = [&](int a, int x) {
        return strategy == NoClick::RandomOutput ? 0.5 : double(a == (x & 1));
    };
    auto subC = [&](int cc, int) { return strategy == NoClick::RandomOutput ? 0.5 : double(cc == 0); };
    Correlation out(s);
    for (int x = 0; x < s.alice.inputs; ++x)
        for (int y = 0; y < s.bob.inputs; ++y)
            for (int z = 0; z < s.charlie.inputs; ++z)
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < s.bob.outputs; ++b)
                        for (int cc = 0; cc < 2; ++cc) {
                            double v = 0;
                            for (int a2 = 0; a2 < 2; ++a2)
                                for (int c2 = 0; c2 < 2; ++c2) {
                                    double ka = etaA * (a == a2) + (1 - etaA) * subA(a, x);
                                    double kc = etaC * (cc == c2) + (1 - etaC) * subC(cc, z);
                                    v += ka * kc * c(x, y, z, a2, b, c2);
                                }
                            out(x, y, z, a, b, cc) = v;
                        }
    return out;
}

Correlation detection_family(double eta, double V)
{
    return apply_detection_model(closed_form(ClosedForm::PQ14, V), eta, eta, NoClick::AOutputsX_COutputs0);
}

}  // namespace biloc
