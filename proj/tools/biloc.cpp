#include "biloc/correlators.hpp"
#include "biloc/feasibility.hpp"
#include "biloc/inequalities.hpp"
#include "biloc/json_io.hpp"
#include "biloc/quantum.hpp"
#include "biloc/simulators.hpp"
#include "biloc/trilocality.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace biloc;

namespace {

struct Global {
    std::uint64_t seed = 0;
    std::string out;
    bool strict = false;
    double tol = 1e-10;
};

struct Inconclusive {};

Json metadata(const CLI::App* sub, const Global& g)
{
    Json flags = Json::object();
    for (const CLI::Option* o : sub->get_options()) {
        if (o->count() == 0 || o->get_name() == "--help") continue;
        auto res = o->results();
        std::string name = o->get_name();
        while (!name.empty() && name.front() == '-') name.erase(name.begin());
        if (res.size() == 1)
            flags[name] = res[0];
        else if (res.empty())
            flags[name] = true;
        else
            flags[name] = res;
    }
    return {{"version", BILOC_VERSION}, {"command", sub->get_name()}, {"seed", g.seed}, {"strict", g.strict},
            {"tol", g.tol}, {"threads", worker_count()}, {"flags", flags}};
}

void emit(const std::string& text, const Global& g)
{
    if (g.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(g.out);
    if (!f) throw DomainError("cannot write " + g.out);
    f << text;
}

void emit_json(Json j, const CLI::App* sub, const Global& g)
{
    Json out;
    out["meta"] = metadata(sub, g);
    for (auto& [k, v] : j.items()) out[k] = v;
    emit(out.dump(2) + "\n", g);
}

std::string csv_header(const CLI::App* sub, const Global& g) { return "# " + metadata(sub, g).dump() + "\n"; }

BlochVector parse_vec(const std::string& s)
{
    std::stringstream ss(s);
    std::string part;
    std::vector<double> v;
    while (std::getline(ss, part, ',')) {
        try {
            v.push_back(std::stod(part));
        } catch (...) {
            throw DomainError("malformed vector component '" + part + "' in '" + s + "'");
        }
    }
    if (v.size() != 3) throw DomainError("expected three comma-separated components: " + s);
    return bloch_normalized(v[0], v[1], v[2]);
}

std::vector<double> parse_grid(const std::string& s)
{
    double a, b, step;
    char c1, c2;
    std::stringstream ss(s);
    if (!(ss >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0 || b < a)
        throw DomainError("grid must be start:stop:step, got '" + s + "'");
    std::vector<double> g;
    int n = int(std::floor((b - a) / step + 1e-9));
    for (int i = 0; i <= n; ++i) g.push_back(std::min(a + i * step, b));
    return g;
}

bool parse_rational(const std::string& s, Rational& r)
{
    auto slash = s.find('/');
    try {
        if (slash != std::string::npos) {
            r = Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
            return true;
        }
        std::size_t pos;
        long long v = std::stoll(s, &pos);
        if (pos == s.size()) {
            r = Rational(v);
            return true;
        }
    } catch (...) {
    }
    return false;
}

double parse_number(const std::string& s)
{
    Rational r;
    if (parse_rational(s, r)) return boost::rational_cast<double>(r);
    try {
        std::size_t pos;
        double v = std::stod(s, &pos);
        if (pos == s.size()) return v;
    } catch (...) {
    }
    throw DomainError("not a number: '" + s + "'");
}

std::function<Correlation(double)> family_of(const std::string& name, double eta, double xi)
{
    if (name == "detection") return [eta](double V) { return detection_family(eta, V); };
    if (name == "tradeoff") return [xi](double V) { return tradeoff_correlation(xi, V); };
    ClosedForm k = closed_form_from_string(name);
    return [k](double V) { return closed_form(k, V); };
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Bilocality toolkit: correlations, inequalities, decompositions, feasibility, simulations"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", BILOC_VERSION);
    Global g;
    app.add_option("--seed", g.seed, "master seed")->capture_default_str();
    app.add_option("--out", g.out, "write output to this file instead of stdout");
    app.add_flag("--strict", g.strict, "exit 3 on inconclusive verdicts");
    app.add_option("--tol", g.tol, "squared-distance tolerance for explicit models")->capture_default_str();

    // gen
    auto* gen = app.add_subcommand("gen", "generate a correlation");
    std::string setup = "pq14", vstr = "1";
    double theta1 = M_PI / 2, theta2 = M_PI / 2, eta = 1, xi = 0, I = 0, J = 0, L = 0;
    std::string caseStr = "14";
    bool kernel = false, csv = false;
    std::string setupFile;
    gen->add_option("--setup", setup,
                    "pq14|pq22|pq13|p0-14|p0-22|p0-13|nonmaxent|detection|tradeoff|slice")
        ->capture_default_str();
    gen->add_option("--v", vstr, "visibility (decimal or p/q for exact output)")->capture_default_str();
    gen->add_flag("--kernel", kernel, "evaluate closed-form setups through the density-matrix kernel");
    gen->add_option("--setup-file", setupFile, "setup JSON evaluated through the kernel");
    gen->add_flag("--csv", csv, "write the correlation as CSV");
    gen->add_option("--theta1", theta1);
    gen->add_option("--theta2", theta2);
    gen->add_option("--eta", eta);
    gen->add_option("--xi", xi);
    gen->add_option("--case", caseStr);
    gen->add_option("--I", I);
    gen->add_option("--J", J);
    gen->add_option("--L", L);

    auto* eval = app.add_subcommand("eval", "evaluate inequalities and structural checks");
    std::string inPath;
    eval->add_option("--in", inPath, "correlation JSON")->required();

    auto* search = app.add_subcommand("search", "search for an explicit bilocal model");
    int restarts = 64;
    search->add_option("--in", inPath, "correlation JSON")->required();
    search->add_option("--restarts", restarts)->capture_default_str();

    auto* certify = app.add_subcommand("certify", "check an explicit decomposition or certify non-bilocality");
    std::string table;
    TableParams tp;
    double K = NAN;
    int depth = 16;
    certify->add_option("--table", table, "I|II|III|IV|V-local|V-bilocal");
    certify->add_option("--in", inPath, "correlation JSON to certify");
    certify->add_option("--I", tp.I);
    certify->add_option("--J", tp.J);
    certify->add_option("--K", K);
    certify->add_option("--L", tp.L);
    certify->add_option("--M", tp.M);
    certify->add_option("--eta", tp.eta);
    certify->add_option("--V,--v", tp.V);
    certify->add_option("--xi", tp.xi);
    certify->add_option("--depth", depth, "relaxation branching depth")->capture_default_str();

    auto* threshold = app.add_subcommand("threshold", "bracket the bilocal threshold of a family by bisection");
    std::string family = "pq14", over = "v";
    double width = 1e-3, lo = 0, hi = 1, vfixed = 1;
    int trestarts = 8;
    threshold->add_option("--family", family, "pq14|pq22|pq13|detection|tradeoff")->capture_default_str();
    threshold->add_option("--over", over, "v (visibility) or eta (detection efficiency)")->capture_default_str();
    threshold->add_option("--eta", eta);
    threshold->add_option("--xi", xi);
    threshold->add_option("--v", vfixed, "visibility when scanning eta")->capture_default_str();
    threshold->add_option("--lo", lo)->capture_default_str();
    threshold->add_option("--hi", hi)->capture_default_str();
    threshold->add_option("--width", width)->capture_default_str();
    threshold->add_option("--restarts", trestarts)->capture_default_str();
    threshold->add_option("--depth", depth)->capture_default_str();

    auto* tradeoff = app.add_subcommand("tradeoff", "local/bilocal visibility trade-off front");
    std::string xiGrid = "0:1:0.25";
    bool measure = false;
    tradeoff->add_option("--xi-grid", xiGrid)->capture_default_str();
    tradeoff->add_flag("--measure", measure, "also measure thresholds numerically");

    auto* detection = app.add_subcommand("detection", "bilocal visibility versus detection efficiency");
    std::string etaGrid = "0.5:1.0:0.01";
    detection->add_option("--eta-grid", etaGrid)->capture_default_str();

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo simulation of the classical protocols");
    std::string protocol = "werner", avec = "0,0,1", cvec = "0,0,1";
    std::uint64_t nsamples = 1000000;
    simulate->add_option("--protocol", protocol, "werner|comm2")->capture_default_str();
    simulate->add_option("--n", nsamples)->capture_default_str();
    simulate->add_option("--a", avec)->capture_default_str();
    simulate->add_option("--c", cvec)->capture_default_str();

    auto* triloc = app.add_subcommand("triloc", "four-partite trilocality example");
    bool demo = false;
    triloc->add_flag("--demo", demo, "run the quantum example");
    triloc->add_option("--in", inPath, "four-partite JSON {\"p\": [16 entries, x,a,b,y]}");

    auto* slice = app.add_subcommand("export-slice", "boundary curves of the (I,J) slice as CSV");
    int grid = 201;
    slice->add_option("--case", caseStr, "22|14|13")->capture_default_str();
    slice->add_option("--grid", grid)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        SearchConfig sc;
        sc.seed = g.seed;
        sc.tol = g.tol;
        RelaxConfig rc;
        rc.depth = depth;

        if (*gen) {
            Correlation c;
            std::optional<QuantumSetup> used;
            Rational rv;
            bool exact = parse_rational(vstr, rv);
            double V = parse_number(vstr);
            if (!setupFile.empty()) {
                used = setup_from_json(read_json_file(setupFile));
                c = generate_correlation(*used);
            } else if (setup == "nonmaxent") {
                used = nonmaxent_setup(theta1, theta2).setup;
                c = generate_correlation(*used);
            } else if (setup == "detection") {
                c = detection_family(eta, V);
            } else if (setup == "tradeoff") {
                c = tradeoff_correlation(xi, V);
            } else if (setup == "slice") {
                Case k = case_from_string(caseStr);
                c = k == Case::C13 ? slice_point13(I, J, L) : slice_point(k, I, J);
            } else {
                ClosedForm k = closed_form_from_string(setup);
                if (kernel) {
                    if (V < 0 || V > 1) throw DomainError("visibility must lie in [0, 1]");
                    QuantumSetup q = standard_setup(k);
                    q.v1 = q.v2 = std::sqrt(V);
                    used = q;
                    c = generate_correlation(q);
                } else
                    c = exact ? closed_form(k, rv) : closed_form(k, V);
            }
            if (csv) {
                emit(csv_header(gen, g) + to_csv(c), g);
            } else {
                Json j = {{"correlation", to_json(c)}};
                if (used) j["setup"] = to_json(*used);
                emit_json(j, gen, g);
            }
        } else if (*eval) {
            Correlation c = correlation_from_json(read_json_file(inPath));
            Json j;
            auto viol = validate(c, 1e-9);
            j["valid"] = viol.empty();
            auto ns = is_non_signaling(c);
            j["non_signaling"] = ns.non_signaling;
            j["signaling_worst"] = ns.worst;
            j["ac_product"] = ac_product_check(c);
            j["ac_deviation"] = ac_product_deviation(c);
            Json violations = Json::array();
            if (!viol.empty()) violations.push_back("validity");
            if (!ns.non_signaling) violations.push_back("signaling");
            if (!ac_product_check(c)) violations.push_back("ac_product");
            IJValue v = ij(c);
            j["scenario"] = v.scenario;
            j["I"] = v.I;
            j["J"] = v.J;
            j["sqrt_sum"] = v.biloc_lhs();
            j["abs_sum"] = v.local_lhs();
            if (v.scenario == "13") j["abs_sum_13"] = v.local_lhs13();
            if (bilocal_test(v).violated) violations.push_back("bilocal");
            if (v.local_lhs() > 1 + 1e-12) violations.push_back("local");
            if (c.scenario().is14()) {
                auto lv = legacy_inequality(c);
                j["legacy"] = {{"I_plus", lv.I_plus}, {"I_minus", lv.I_minus}, {"satisfied", lv.satisfied}};
                if (!lv.satisfied) violations.push_back("legacy");
            }
            j["violations"] = violations;
            if (c.scenario().bob.inputs == 1) {
                Json ch = Json::array();
                for (int b = 0; b < c.scenario().bob.outputs; ++b) ch.push_back(chsh_conditioned(c, b));
                j["chsh_conditioned"] = ch;
            }
            emit_json(j, eval, g);
        } else if (*search) {
            Correlation c = correlation_from_json(read_json_file(inPath));
            sc.restarts = restarts;
            Certificate cert = heuristic_search(c, sc);
            emit_json({{"certificate", to_json(cert)}}, search, g);
            if (cert.verdict != Verdict::Bilocal && g.strict) throw Inconclusive{};
        } else if (*certify) {
            if (!table.empty()) {
                if (!std::isnan(K)) tp.K = K;
                TableDecomposition d = table_decomposition(table_from_string(table), tp);
                ConstraintReport rep = check_constraints(d.e);
                Correlation back = correlation_from_weights(d.q);
                Json j = to_json(d);
                j["checks"] = {{"nonneg_ok", rep.nonneg_ok},
                               {"biloc_ok", rep.biloc_ok},
                               {"worst_negative", rep.worst_negative},
                               {"worst_biloc", rep.worst_biloc},
                               {"max_target_diff", back.max_abs_diff(d.target)}};
                emit_json({{"decomposition", j}}, certify, g);
            } else if (!inPath.empty()) {
                Correlation c = correlation_from_json(read_json_file(inPath));
                Certificate cert = certify_nonbilocal(c, rc);
                emit_json({{"certificate", to_json(cert)}}, certify, g);
                if (cert.verdict == Verdict::Inconclusive && g.strict) throw Inconclusive{};
            } else
                throw DomainError("certify needs --table or --in");
        } else if (*threshold) {
            sc.restarts = trestarts;
            ThresholdResult r;
            if (over == "v") {
                ThresholdConfig tc;
                tc.search = sc;
                tc.relax = rc;
                tc.width = width;
                tc.vmin = lo;
                tc.vmax = hi;
                r = visibility_threshold(family_of(family, eta, xi), tc);
            } else if (over == "eta") {
                if (family != "detection") throw DomainError("--over eta applies to the detection family");
                auto explained = [&](double e) {
                    return heuristic_search(detection_family(e, vfixed), sc).verdict == Verdict::Bilocal;
                };
                auto certified = [&](double e) {
                    return certify_nonbilocal(detection_family(e, vfixed), rc).verdict == Verdict::NonBilocal;
                };
                r = bisect_threshold(explained, certified, lo, hi, width);
            } else
                throw DomainError("--over must be v or eta");
            emit_json({{"lower", r.lower}, {"upper", r.upper}, {"bracketed", r.bracketed}, {"status", r.verdict == Verdict::Inconclusive ? "inconclusive" : "bracketed"}},
                      threshold, g);
            if (r.verdict == Verdict::Inconclusive && g.strict) throw Inconclusive{};
        } else if (*tradeoff) {
            std::ostringstream os;
            os << csv_header(tradeoff, g) << "xi,V_loc,V_biloc,I_pred,theta0,theta1";
            if (measure) os << ",V_loc_lp,V_biloc_lower,V_biloc_upper";
            os << "\n";
            for (double x : parse_grid(xiGrid)) {
                TradeoffPoint t = tradeoff_front(x);
                os << format_double(x) << "," << format_double(t.V_loc) << "," << format_double(t.V_biloc) << ","
                   << format_double(t.I) << "," << format_double(t.theta[0]) << "," << format_double(t.theta[1]);
                if (measure) {
                    double a = 0, b = 1;
                    while (b - a > width) {
                        double m = 0.5 * (a + b);
                        (local_membership(tradeoff_correlation(x, m)).local ? a : b) = m;
                    }
                    ThresholdConfig tc;
                    tc.search = sc;
                    tc.search.restarts = trestarts;
                    tc.relax = rc;
                    tc.width = width;
                    ThresholdResult r = visibility_threshold(family_of("tradeoff", 1, x), tc);
                    os << "," << format_double(0.5 * (a + b)) << "," << format_double(r.lower) << ","
                       << format_double(r.upper);
                }
                os << "\n";
            }
            emit(os.str(), g);
        } else if (*detection) {
            std::ostringstream os;
            os << csv_header(detection, g) << "eta,e_eta,V_biloc,V_inequality\n";
            for (double e : parse_grid(etaGrid)) {
                // visibility where the square-root inequality starts to be violated
                double a = 0, b = 1;
                if (!bilocal_test(ij(detection_family(e, b))).violated)
                    a = b = NAN;
                else
                    while (b - a > 1e-12) {
                        double m = 0.5 * (a + b);
                        (bilocal_test(ij(detection_family(e, m))).violated ? b : a) = m;
                    }
                os << format_double(e) << "," << format_double(detection_offset(e)) << ","
                   << format_double(detection_vbiloc(e)) << "," << format_double(0.5 * (a + b)) << "\n";
            }
            emit(os.str(), g);
        } else if (*simulate) {
            SimConfig cfg;
            cfg.samples = nsamples;
            cfg.seed = g.seed;
            cfg.a = parse_vec(avec);
            cfg.c = parse_vec(cvec);
            SimEstimate est = biloc::simulate(protocol_from_string(protocol), cfg);
            Json j = {{"estimate", to_json(est)}};
            try {
                VisibilityEstimate v = estimate_visibility(est, cfg.a, cfg.c);
                j["visibility"] = {{"V_hat", v.V_hat}, {"stderr", v.stderr_}};
            } catch (const DomainError&) {
                j["visibility"] = nullptr;
            }
            emit_json(j, simulate, g);
        } else if (*triloc) {
            FourPartiteCorrelation f;
            Json j;
            if (demo || inPath.empty()) {
                f = example_quantum_fourpartite();
                FourPartiteCorrelation k = example_quantum_fourpartite_kernel();
                double d = 0;
                for (int i = 0; i < 16; ++i) d = std::max(d, std::abs(f.p[i] - k.p[i]));
                j["kernel_max_diff"] = d;
            } else {
                Json in = read_json_file(inPath);
                if (!in.contains("p") || !in["p"].is_array() || in["p"].size() != 16)
                    throw DomainError("$.p: expected 16 entries");
                for (int i = 0; i < 16; ++i) {
                    if (!in["p"][i].is_number()) throw DomainError("$.p[" + std::to_string(i) + "]: expected a number");
                    f.p[i] = in["p"][i].get<double>();
                }
            }
            BipartiteConditional c = four_to_conditional(f);
            auto model = bipartite_local_model(c);
            j["four_partite"] = to_json(f);
            j["conditional"] = to_json(c);
            j["chsh"] = conditional_chsh(c);
            j["local"] = bool(model);
            j["verdict"] = model ? "trilocal" : "non-trilocal";
            if (model) j["local_model"] = *model;
            emit_json(j, triloc, g);
        } else if (*slice) {
            if (grid < 2) throw DomainError("grid must be at least 2");
            Case k = case_from_string(caseStr);
            std::ostringstream os;
            os << csv_header(slice, g) << "curve,I,J\n";
            auto row = [&](const char* name, double i, double jj) {
                os << name << "," << format_double(i) << "," << format_double(jj) << "\n";
            };
            for (int sI : {1, -1})
                for (int sJ : {1, -1})
                    for (int n = 0; n < grid; ++n) {
                        double t = double(n) / (grid - 1);
                        row("bilocal", sI * t * t, sJ * (1 - t) * (1 - t));
                        row("local", sI * t, sJ * (1 - t));
                        if (k == Case::C13) row("local13", sI * t, sJ * (1 - t) / 2);
                    }
            emit(os.str(), g);
        }
    } catch (const Inconclusive&) {
        return 3;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
