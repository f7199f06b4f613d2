#include "biloc/feasibility.hpp"

#include "biloc/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace biloc {

BilocalModel::BilocalModel(Scenario s) : scenario(s)
{
    if (s.alice != PartySpec{2, 2} || s.charlie != PartySpec{2, 2})
        throw DomainError("bilocal models need binary Alice and Charlie with two inputs");
    bob.assign(16 * s.bob.inputs * s.bob.outputs, 1.0 / s.bob.outputs);
    rho1.fill(0.25);
    rho2.fill(0.25);
}

double& BilocalModel::response(int alpha, int gamma, int y, int b)
{
    return bob[((alpha * 4 + gamma) * scenario.bob.inputs + y) * scenario.bob.outputs + b];
}

double BilocalModel::response(int alpha, int gamma, int y, int b) const
{
    return bob[((alpha * 4 + gamma) * scenario.bob.inputs + y) * scenario.bob.outputs + b];
}

namespace {

inline int bit(int s, int x) { return x == 0 ? s >> 1 : s & 1; }

int bob_output(Case k, int beta, int y) { return k == Case::C22 ? bit(beta, y) : beta; }

}  // namespace

BilocalModel BilocalModel::from_weights(const WeightTable& w)
{
    BilocalModel m(scenario_of(w.kind));
    const int nb = w.nb();
    m.rho1.fill(0);
    m.rho2.fill(0);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < nb; ++b)
            for (int g = 0; g < 4; ++g) {
                m.rho1[a] += w.at(a, b, g);
                m.rho2[g] += w.at(a, b, g);
            }
    const int ny = m.scenario.bob.inputs, no = m.scenario.bob.outputs;
    for (int a = 0; a < 4; ++a)
        for (int g = 0; g < 4; ++g) {
            double tot = 0;
            for (int b = 0; b < nb; ++b) tot += w.at(a, b, g);
            if (tot <= 1e-300) continue;
            for (int y = 0; y < ny; ++y) {
                for (int o = 0; o < no; ++o) m.response(a, g, y, o) = 0;
                for (int b = 0; b < nb; ++b) m.response(a, g, y, bob_output(w.kind, b, y)) += w.at(a, b, g) / tot;
            }
        }
    return m;
}

Correlation model_to_correlation(const BilocalModel& m)
{
    Correlation c(m.scenario);
    const int ny = m.scenario.bob.inputs, no = m.scenario.bob.outputs;
    for (int a = 0; a < 4; ++a)
        for (int g = 0; g < 4; ++g) {
            double w = m.rho1[a] * m.rho2[g];
            if (w == 0) continue;
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < ny; ++y)
                    for (int z = 0; z < 2; ++z)
                        for (int b = 0; b < no; ++b) c(x, y, z, bit(a, x), b, bit(g, z)) += w * m.response(a, g, y, b);
        }
    return c;
}

WeightTable model_to_weights(const BilocalModel& m)
{
    Case k = case_of(m.scenario);
    WeightTable w(k);
    for (int a = 0; a < 4; ++a)
        for (int g = 0; g < 4; ++g) {
            double pr = m.rho1[a] * m.rho2[g];
            for (int b = 0; b < w.nb(); ++b) {
                double r = 1;
                if (k == Case::C22)
                    r = m.response(a, g, 0, b >> 1) * m.response(a, g, 1, b & 1);
                else
                    r = m.response(a, g, 0, b);
                w.at(a, b, g) = pr * r;
            }
        }
    return w;
}

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::Bilocal: return "bilocal";
    case Verdict::NonBilocal: return "non-bilocal";
    case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

// Marginal-consistent source weights are one-parameter families: rho(t) = base + t * dir.
struct SourceLine {
    std::array<double, 4> base{}, dir{};
    double lo = 0, hi = 0;
    std::array<double, 4> at(double t) const
    {
        std::array<double, 4> r;
        for (int i = 0; i < 4; ++i) r[i] = std::max(0.0, base[i] + t * dir[i]);
        return r;
    }
};

// p0 = P(out=0|input 0), p1 = P(out=0|input 1); rho = (t, p0 - t, p1 - t, 1 - p0 - p1 + t)
SourceLine source_line(double p0, double p1)
{
    SourceLine s;
    s.base = {0, p0, p1, 1 - p0 - p1};
    s.dir = {1, -1, -1, 1};
    s.lo = std::max(0.0, p0 + p1 - 1);
    s.hi = std::min(p0, p1);
    if (s.hi < s.lo) s.hi = s.lo = 0.5 * (s.lo + s.hi);
    return s;
}

struct Marginals {
    double a0, a1, c0, c1;
};

Marginals outer_marginals(const Correlation& P)
{
    const Scenario& s = P.scenario();
    const int ny = s.bob.inputs, no = s.bob.outputs;
    double pa[2] = {0, 0}, pc[2] = {0, 0};
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < ny; ++y)
            for (int z = 0; z < 2; ++z)
                for (int b = 0; b < no; ++b)
                    for (int c = 0; c < 2; ++c) {
                        pa[x] += P(x, y, z, 0, b, c);
                        pc[z] += P(x, y, z, c, b, 0);
                    }
    double norm = 2.0 * ny;
    return {pa[0] / norm, pa[1] / norm, pc[0] / norm, pc[1] / norm};
}

struct Fit {
    BilocalModel model;
    double l1 = kInf;
};

// Best Bob response for fixed sources: min sum |model - target| as an LP over w = rho1 rho2 R.
Fit bob_step(const Correlation& P, const std::array<double, 4>& r1, const std::array<double, 4>& r2)
{
    const Scenario& s = P.scenario();
    const int ny = s.bob.inputs, no = s.bob.outputs;
    Fit f{BilocalModel(s), kInf};
    f.model.rho1 = r1;
    f.model.rho2 = r2;

    LinearProgram lp;
    std::vector<int> var(16 * ny * no, -1);
    for (int a = 0; a < 4; ++a)
        for (int g = 0; g < 4; ++g) {
            double pr = r1[a] * r2[g];
            if (pr <= 1e-14) continue;
            for (int y = 0; y < ny; ++y) {
                LinearProgram::Row row;
                for (int b = 0; b < no; ++b) {
                    int v = lp.add_var();
                    var[((a * 4 + g) * ny + y) * no + b] = v;
                    row.push_back({v, 1.0});
                }
                lp.add_eq(std::move(row), pr);
            }
        }
    const std::size_t N = P.data().size();
    std::vector<LinearProgram::Row> rows(N);
    std::vector<double> fixedPart(N, 0.0);
    for (int a = 0; a < 4; ++a)
        for (int g = 0; g < 4; ++g)
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < ny; ++y)
                    for (int z = 0; z < 2; ++z)
                        for (int b = 0; b < no; ++b) {
                            std::size_t k = P.offset(x, y, z, bit(a, x), b, bit(g, z));
                            int v = var[((a * 4 + g) * ny + y) * no + b];
                            if (v >= 0)
                                rows[k].push_back({v, 1.0});
                            else
                                fixedPart[k] += r1[a] * r2[g] / no;
                        }
    for (std::size_t k = 0; k < N; ++k) {
        int rp = lp.add_var(0, kInf, 1.0), rm = lp.add_var(0, kInf, 1.0);
        rows[k].push_back({rp, -1.0});
        rows[k].push_back({rm, 1.0});
        lp.add_eq(std::move(rows[k]), P.data()[k] - fixedPart[k]);
    }
    LpResult res = lp_solve(lp);
    if (res.status != LpStatus::Optimal) return f;
    for (int a = 0; a < 4; ++a)
        for (int g = 0; g < 4; ++g) {
            double pr = r1[a] * r2[g];
            for (int y = 0; y < ny; ++y) {
                if (var[((a * 4 + g) * ny + y) * no] < 0) continue;
                double tot = 0;
                for (int b = 0; b < no; ++b) tot += std::max(0.0, res.x[var[((a * 4 + g) * ny + y) * no + b]]);
                for (int b = 0; b < no; ++b) {
                    double w = std::max(0.0, res.x[var[((a * 4 + g) * ny + y) * no + b]]);
                    f.model.response(a, g, y, b) = tot > 0 ? w / tot : 1.0 / no;
                }
                (void)pr;
            }
        }
    f.l1 = res.objective;
    return f;
}

// argmin over t in [lo, hi] of sum_k |g0_k + t g1_k - p_k| (weighted median of breakpoints)
double l1_line_min(const std::vector<double>& g0, const std::vector<double>& g1, const std::vector<double>& p,
                   double lo, double hi)
{
    std::vector<std::pair<double, double>> bp;
    double slope = 0;  // derivative at t -> -inf restricted to terms with g1 != 0
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (std::abs(g1[k]) < 1e-15) continue;
        bp.push_back({(p[k] - g0[k]) / g1[k], std::abs(g1[k])});
        slope -= std::abs(g1[k]);
    }
    if (bp.empty()) return 0.5 * (lo + hi);
    std::sort(bp.begin(), bp.end());
    double t = bp.back().first;
    for (auto& [tk, w] : bp) {
        slope += 2 * w;
        if (slope >= 0) {
            t = tk;
            break;
        }
    }
    return std::clamp(t, lo, hi);
}

// Optimal position on one source line with the other source and Bob's response fixed.
double source_step(const Correlation& P, const BilocalModel& m, const SourceLine& line, bool first)
{
    const Scenario& s = P.scenario();
    const int ny = s.bob.inputs, no = s.bob.outputs;
    const std::size_t N = P.data().size();
    std::vector<double> g0(N, 0.0), g1(N, 0.0);
    for (int a = 0; a < 4; ++a)
        for (int g = 0; g < 4; ++g) {
            double c0, c1;
            if (first) {
                c0 = line.base[a] * m.rho2[g];
                c1 = line.dir[a] * m.rho2[g];
            } else {
                c0 = m.rho1[a] * line.base[g];
                c1 = m.rho1[a] * line.dir[g];
            }
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < ny; ++y)
                    for (int z = 0; z < 2; ++z)
                        for (int b = 0; b < no; ++b) {
                            std::size_t k = P.offset(x, y, z, bit(a, x), b, bit(g, z));
                            double r = m.response(a, g, y, b);
                            g0[k] += c0 * r;
                            g1[k] += c1 * r;
                        }
        }
    return l1_line_min(g0, g1, P.data(), line.lo, line.hi);
}

struct Distances {
    double l2sq = 0, linf = 0;
};

Distances distances(const Correlation& a, const Correlation& b)
{
    Distances d;
    for (std::size_t k = 0; k < a.data().size(); ++k) {
        double e = a.data()[k] - b.data()[k];
        d.l2sq += e * e;
        d.linf = std::max(d.linf, std::abs(e));
    }
    return d;
}

struct RestartResult {
    Fit fit;
    Distances dist;
    bool ok = false;
};

RestartResult run_restart(const Correlation& P, const SourceLine& L1, const SourceLine& L2, const SearchConfig& cfg,
                          int index)
{
    std::mt19937_64 rng(splitmix64(cfg.seed + std::uint64_t(index)));
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double t, u;
    if (index == 0) {
        // product point of the marginals
        t = std::clamp(L1.base[1] * L1.base[2], L1.lo, L1.hi);
        u = std::clamp(L2.base[1] * L2.base[2], L2.lo, L2.hi);
    } else {
        t = L1.lo + U(rng) * (L1.hi - L1.lo);
        u = L2.lo + U(rng) * (L2.hi - L2.lo);
    }
    const double success = 1e-9;
    auto eval = [&](double tt, double uu) { return bob_step(P, L1.at(tt), L2.at(uu)); };

    Fit best = eval(t, u);
    int budget = cfg.max_rounds;
    // alternating exact block steps
    for (int round = 0; round < 20 && best.l1 > success && budget > 0; ++round) {
        double nt = source_step(P, best.model, L1, true);
        BilocalModel tmp = best.model;
        tmp.rho1 = L1.at(nt);
        double nu = source_step(P, tmp, L2, false);
        Fit f = eval(nt, nu);
        --budget;
        if (f.l1 < best.l1 - 1e-12) {
            best = f;
            t = nt;
            u = nu;
        } else
            break;
    }
    // compass polish on the two source parameters
    double ht = 0.25 * (L1.hi - L1.lo), hu = 0.25 * (L2.hi - L2.lo);
    const double hmin = 1e-7 * std::max({L1.hi - L1.lo, L2.hi - L2.lo, 1e-3});
    static const int dirs[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}};
    while (best.l1 > success && budget > 0 && (ht > hmin || hu > hmin)) {
        bool improved = false;
        for (auto& d : dirs) {
            double nt = std::clamp(t + d[0] * ht, L1.lo, L1.hi), nu = std::clamp(u + d[1] * hu, L2.lo, L2.hi);
            if (nt == t && nu == u) continue;
            Fit f = eval(nt, nu);
            --budget;
            if (f.l1 < best.l1 - 1e-15) {
                best = f;
                t = nt;
                u = nu;
                improved = true;
                break;
            }
        }
        if (!improved) {
            ht *= 0.5;
            hu *= 0.5;
        }
    }
    RestartResult r;
    r.fit = best;
    r.dist = distances(model_to_correlation(best.model), P);
    r.ok = r.dist.l2sq <= cfg.tol && r.dist.linf <= 1e-8;
    return r;
}

}  // namespace

Certificate heuristic_search(const Correlation& target, const SearchConfig& cfg)
{
    const Scenario& s = target.scenario();
    if (s.alice != PartySpec{2, 2} || s.charlie != PartySpec{2, 2})
        throw DomainError("heuristic search needs binary Alice and Charlie with two inputs");
    Marginals mg = outer_marginals(target);
    SourceLine L1 = source_line(mg.a0, mg.a1), L2 = source_line(mg.c0, mg.c1);

    Certificate cert;
    const int batch = 8;
    std::optional<RestartResult> best;
    for (int start = 0; start < cfg.restarts; start += batch) {
        int n = std::min(batch, cfg.restarts - start);
        std::vector<RestartResult> out(n);
        parallel_for(n, [&](int i) { out[i] = run_restart(target, L1, L2, cfg, start + i); });
        for (int i = 0; i < n; ++i) {
            cert.restarts_used = start + i + 1;
            if (!best || out[i].dist.l2sq < best->dist.l2sq) best = out[i];
            if (out[i].ok) {
                best = out[i];
                break;
            }
        }
        if (best && best->ok) break;
    }
    if (!best) return cert;
    cert.distance = best->dist.l2sq;
    cert.linf = best->dist.linf;
    cert.model = best->fit.model;
    cert.verdict = best->ok ? Verdict::Bilocal : Verdict::Inconclusive;
    cert.reason = best->ok ? "explicit model" : "no model found";
    return cert;
}

namespace {

struct Box {
    double tl, th, ul, uh;
    int depth;
};

// Feasibility of the McCormick relaxation of q_{a.g} = rho1_a(t) rho2_g(u) on a box.
LpStatus relaxation_lp(const Correlation& P, Case k, const SourceLine& L1, const SourceLine& L2, const Box& box)
{
    const int nb = bob_strategies(k);
    const int nq = 16 * nb;
    LinearProgram lp(nq);
    const int tv = lp.add_var(box.tl, box.th), uv = lp.add_var(box.ul, box.uh);
    auto qi = [&](int a, int b, int g) { return (a * nb + b) * 4 + g; };

    std::vector<LinearProgram::Row> rows(P.data().size());
    const Scenario& s = P.scenario();
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < nb; ++b)
            for (int g = 0; g < 4; ++g)
                for (int x = 0; x < 2; ++x)
                    for (int y = 0; y < s.bob.inputs; ++y)
                        for (int z = 0; z < 2; ++z)
                            rows[P.offset(x, y, z, bit(a, x), bob_output(k, b, y), bit(g, z))].push_back(
                                {qi(a, b, g), 1.0});
    for (std::size_t i = 0; i < rows.size(); ++i) lp.add_eq(std::move(rows[i]), P.data()[i]);

    for (int a = 0; a < 4; ++a) {
        LinearProgram::Row r;
        for (int b = 0; b < nb; ++b)
            for (int g = 0; g < 4; ++g) r.push_back({qi(a, b, g), 1.0});
        r.push_back({tv, -L1.dir[a]});
        lp.add_eq(std::move(r), L1.base[a]);
    }
    for (int g = 0; g < 4; ++g) {
        LinearProgram::Row r;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < nb; ++b) r.push_back({qi(a, b, g), 1.0});
        r.push_back({uv, -L2.dir[g]});
        lp.add_eq(std::move(r), L2.base[g]);
    }
    // X = xb + xd t, Y = yb + yd u, W = sum_b q_{abg}
    for (int a = 0; a < 4; ++a)
        for (int g = 0; g < 4; ++g) {
            double xb = L1.base[a], xd = L1.dir[a], yb = L2.base[g], yd = L2.dir[g];
            double x1 = xb + xd * box.tl, x2 = xb + xd * box.th;
            double y1 = yb + yd * box.ul, y2 = yb + yd * box.uh;
            double xl = std::max(0.0, std::min(x1, x2)), xh = std::max(x1, x2);
            double yl = std::max(0.0, std::min(y1, y2)), yh = std::max(y1, y2);
            // W - xc Y - X yc  (<= or >=)  -xc yc
            auto env = [&](double xc, double yc, bool upper) {
                LinearProgram::Row r;
                for (int b = 0; b < nb; ++b) r.push_back({qi(a, b, g), 1.0});
                r.push_back({uv, -xc * yd});
                r.push_back({tv, -yc * xd});
                double rhs = -xc * yc + xc * yb + yc * xb;
                if (upper)
                    lp.add_le(std::move(r), rhs);
                else
                    lp.add_ge(std::move(r), rhs);
            };
            env(xl, yl, false);
            env(xh, yh, false);
            env(xh, yl, true);
            env(xl, yh, true);
        }
    return lp_solve(lp).status;
}

}  // namespace

Certificate relaxation_bound(const Correlation& target, const RelaxConfig& cfg)
{
    Case k = case_of(target.scenario());
    Marginals mg = outer_marginals(target);
    SourceLine L1 = source_line(mg.a0, mg.a1), L2 = source_line(mg.c0, mg.c1);
    Certificate cert;
    std::vector<Box> stack{{L1.lo, L1.hi, L2.lo, L2.hi, 0}};
    const double wt = std::max(L1.hi - L1.lo, 1e-300), wu = std::max(L2.hi - L2.lo, 1e-300);
    while (!stack.empty()) {
        Box b = stack.back();
        stack.pop_back();
        ++cert.nodes;
        LpStatus st = relaxation_lp(target, k, L1, L2, b);
        if (st == LpStatus::Infeasible) continue;
        if (st != LpStatus::Optimal || b.depth >= cfg.depth || cert.nodes >= cfg.max_nodes) {
            cert.verdict = Verdict::Inconclusive;
            cert.reason = st == LpStatus::Optimal ? "relaxation feasible at maximum depth" : "LP failure";
            return cert;
        }
        Box l = b, r = b;
        l.depth = r.depth = b.depth + 1;
        if ((b.th - b.tl) / wt >= (b.uh - b.ul) / wu) {
            double m = 0.5 * (b.tl + b.th);
            l.th = m;
            r.tl = m;
        } else {
            double m = 0.5 * (b.ul + b.uh);
            l.uh = m;
            r.ul = m;
        }
        stack.push_back(r);
        stack.push_back(l);
    }
    cert.verdict = Verdict::NonBilocal;
    cert.reason = "relaxation infeasible";
    return cert;
}

Certificate certify_nonbilocal(const Correlation& target, const RelaxConfig& cfg)
{
    Certificate cert;
    if (!is_non_signaling(target).non_signaling) {
        cert.verdict = Verdict::NonBilocal;
        cert.reason = "signaling";
        return cert;
    }
    if (!ac_product_check(target)) {
        cert.verdict = Verdict::NonBilocal;
        cert.reason = "Alice and Charlie correlated";
        return cert;
    }
    if (bilocal_test(ij(target)).violated) {
        cert.verdict = Verdict::NonBilocal;
        cert.reason = "bilocal inequality violated";
        return cert;
    }
    return relaxation_bound(target, cfg);
}

ThresholdResult bisect_threshold(const std::function<bool(double)>& explained,
                                 const std::function<bool(double)>& certified, double lo, double hi, double width)
{
    ThresholdResult r;
    r.lower = lo;
    r.upper = hi;
    if (!certified(hi)) {
        r.bracketed = false;
    } else {
        double a = lo, b = hi;
        while (b - a > width) {
            double m = 0.5 * (a + b);
            (certified(m) ? b : a) = m;
        }
        r.upper = b;
    }
    if (!explained(lo)) {
        r.bracketed = false;
        r.lower = lo;
    } else {
        double a = lo, b = r.upper;
        while (b - a > width) {
            double m = 0.5 * (a + b);
            (explained(m) ? a : b) = m;
        }
        r.lower = a;
    }
    // a model at a certified point means one of the two predicates is wrong
    if (r.bracketed && explained(r.upper)) r.bracketed = false;
    if (!r.bracketed || r.lower > r.upper) r.verdict = Verdict::Inconclusive;
    return r;
}

ThresholdResult visibility_threshold(const std::function<Correlation(double)>& family, const ThresholdConfig& cfg)
{
    auto explained = [&](double v) { return heuristic_search(family(v), cfg.search).verdict == Verdict::Bilocal; };
    auto certified = [&](double v) { return certify_nonbilocal(family(v), cfg.relax).verdict == Verdict::NonBilocal; };
    return bisect_threshold(explained, certified, cfg.vmin, cfg.vmax, cfg.width);
}

LocalResult local_membership(const Correlation& c)
{
    Case k = case_of(c.scenario());
    const int nb = bob_strategies(k);
    LinearProgram lp(16 * nb);
    std::vector<LinearProgram::Row> rows(c.data().size());
    const Scenario& s = c.scenario();
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < nb; ++b)
            for (int g = 0; g < 4; ++g)
                for (int x = 0; x < 2; ++x)
                    for (int y = 0; y < s.bob.inputs; ++y)
                        for (int z = 0; z < 2; ++z)
                            rows[c.offset(x, y, z, bit(a, x), bob_output(k, b, y), bit(g, z))].push_back(
                                {(a * nb + b) * 4 + g, 1.0});
    for (std::size_t i = 0; i < rows.size(); ++i) lp.add_eq(std::move(rows[i]), c.data()[i]);
    LpResult res = lp_solve(lp);
    LocalResult out;
    out.status = res.status;
    out.local = res.status == LpStatus::Optimal;
    if (out.local) {
        WeightTable w(k);
        for (std::size_t i = 0; i < w.q.size(); ++i) w.q[i] = std::max(0.0, res.x[i]);
        out.weights = w;
    }
    return out;
}

}  // namespace biloc
