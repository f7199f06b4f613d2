#include "biloc/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace biloc {

namespace {

Json party(const PartySpec& p) { return {{"inputs", p.inputs}, {"outputs", p.outputs}}; }

// {"inputs": n, "outputs": m}; [n, m] is accepted as well
PartySpec party_from(const Json& j, const std::string& path)
{
    PartySpec p;
    if (j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer())
        p = {j[0].get<int>(), j[1].get<int>()};
    else if (j.is_object() && j.contains("inputs") && j.contains("outputs") && j["inputs"].is_number_integer() &&
             j["outputs"].is_number_integer())
        p = {j["inputs"].get<int>(), j["outputs"].get<int>()};
    else
        throw DomainError(path + ": expected {\"inputs\": n, \"outputs\": m}");
    if (p.inputs < 1 || p.outputs < 1) throw DomainError(path + ": inputs and outputs must be positive");
    return p;
}

const Json& field(const Json& j, const char* key, const std::string& path)
{
    if (!j.is_object() || !j.contains(key)) throw DomainError(path + ": missing field '" + key + "'");
    return j.at(key);
}

double number(const Json& j, const std::string& path)
{
    if (!j.is_number()) throw DomainError(path + ": expected a number");
    return j.get<double>();
}

std::string rational_string(const Rational& r)
{
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational rational_from(const Json& j, const std::string& path)
{
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (!j.is_string()) throw DomainError(path + ": expected \"num/den\"");
    std::string s = j.get<std::string>();
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(std::stoll(s));
        std::int64_t den = std::stoll(s.substr(slash + 1));
        if (den == 0) throw DomainError(path + ": zero denominator");
        return Rational(std::stoll(s.substr(0, slash)), den);
    } catch (const DomainError&) {
        throw;
    } catch (...) {
        throw DomainError(path + ": malformed rational '" + s + "'");
    }
}

}  // namespace

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Json to_json(const Correlation& c)
{
    const Scenario& s = c.scenario();
    Json j;
    j["scenario"] = {{"name", s.name()}, {"alice", party(s.alice)}, {"bob", party(s.bob)}, {"charlie", party(s.charlie)}};
    j["layout"] = "x,y,z,a,b,c";
    j["p"] = c.data();
    if (c.exact()) {
        Json ex = Json::array();
        for (const auto& r : *c.exact()) ex.push_back(rational_string(r));
        j["exact"] = ex;
    }
    return j;
}

Correlation correlation_from_json(const Json& doc)
{
    const Json& j = doc.is_object() && doc.contains("correlation") ? doc.at("correlation") : doc;
    const Json& sc = field(j, "scenario", "$");
    Scenario s;
    s.alice = party_from(field(sc, "alice", "$.scenario"), "$.scenario.alice");
    s.bob = party_from(field(sc, "bob", "$.scenario"), "$.scenario.bob");
    s.charlie = party_from(field(sc, "charlie", "$.scenario"), "$.scenario.charlie");
    if (j.contains("layout") && j["layout"] != "x,y,z,a,b,c") throw DomainError("$.layout: unsupported layout");
    const Json& p = field(j, "p", "$");
    if (!p.is_array()) throw DomainError("$.p: expected an array");
    if (p.size() != s.size())
        throw DomainError("$.p: expected " + std::to_string(s.size()) + " entries, got " + std::to_string(p.size()));
    std::vector<double> v(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) v[i] = number(p[i], "$.p[" + std::to_string(i) + "]");
    Correlation c(s, std::move(v));
    if (j.contains("exact")) {
        const Json& ex = j["exact"];
        if (!ex.is_array() || ex.size() != s.size()) throw DomainError("$.exact: size mismatch");
        std::vector<Rational> q;
        for (std::size_t i = 0; i < ex.size(); ++i) q.push_back(rational_from(ex[i], "$.exact[" + std::to_string(i) + "]"));
        c.set_exact(std::move(q));
    }
    return c;
}

Json to_json(const BilocalModel& m)
{
    const Scenario& s = m.scenario;
    Json j;
    j["scenario"] = {{"name", s.name()}, {"alice", party(s.alice)}, {"bob", party(s.bob)}, {"charlie", party(s.charlie)}};
    j["rho1"] = m.rho1;
    j["rho2"] = m.rho2;
    j["bob_layout"] = "alpha,gamma,y,b";
    j["bob"] = m.bob;
    return j;
}

BilocalModel model_from_json(const Json& j)
{
    const Json& sc = field(j, "scenario", "$");
    Scenario s;
    s.alice = party_from(field(sc, "alice", "$.scenario"), "$.scenario.alice");
    s.bob = party_from(field(sc, "bob", "$.scenario"), "$.scenario.bob");
    s.charlie = party_from(field(sc, "charlie", "$.scenario"), "$.scenario.charlie");
    BilocalModel m(s);
    for (const char* key : {"rho1", "rho2"}) {
        const Json& r = field(j, key, "$");
        if (!r.is_array() || r.size() != 4) throw DomainError(std::string("$.") + key + ": expected 4 weights");
        auto& dst = std::string(key) == "rho1" ? m.rho1 : m.rho2;
        for (int i = 0; i < 4; ++i) dst[i] = number(r[i], std::string("$.") + key);
    }
    const Json& b = field(j, "bob", "$");
    if (!b.is_array() || b.size() != m.bob.size()) throw DomainError("$.bob: size mismatch");
    for (std::size_t i = 0; i < b.size(); ++i) m.bob[i] = number(b[i], "$.bob[" + std::to_string(i) + "]");
    return m;
}

Json to_json(const Certificate& c)
{
    Json j;
    j["verdict"] = c.verdict == Verdict::NonBilocal ? "nonbilocal" : to_string(c.verdict);
    j["reason"] = c.reason;
    j["distance"] = std::isfinite(c.distance) ? Json(c.distance) : Json(nullptr);
    j["linf"] = std::isfinite(c.linf) ? Json(c.linf) : Json(nullptr);
    j["model"] = c.model ? to_json(*c.model) : Json(nullptr);
    j["bounds"] = {{"lower", c.lower}, {"upper", c.upper}};
    j["restarts_used"] = c.restarts_used;
    j["nodes"] = c.nodes;
    return j;
}

Json to_json(const TableDecomposition& d)
{
    Json j;
    j["table"] = to_string(d.id);
    j["case"] = to_string(d.q.kind);
    Json params = {{"I", d.params.I}, {"J", d.params.J}};
    if (d.params.K) params["K"] = *d.params.K;
    params["L"] = d.params.L;
    params["M"] = d.params.M;
    params["eta"] = d.params.eta;
    params["V"] = d.params.V;
    params["xi"] = d.params.xi;
    j["params"] = params;
    j["derived"] = d.derived;
    j["weights"] = {{"kind", "q"}, {"scenario", to_string(d.q.kind)}, {"layout", "alpha,beta,gamma"}, {"values", d.q.q}};
    std::vector<bool> freeMask(d.e.fixed.size());
    for (std::size_t i = 0; i < freeMask.size(); ++i) freeMask[i] = !d.e.fixed[i];
    j["correlators"] = {{"kind", "e"}, {"scenario", to_string(d.e.kind)}, {"layout", "i,j,k"}, {"values", d.e.e},
                        {"free_mask", freeMask}};
    j["target"] = to_json(d.target);
    return j;
}

Json to_json(const SimEstimate& e)
{
    Json j;
    j["samples"] = e.samples;
    j["counts"] = e.counts;
    Json m = Json::object();
    static const char* bobNames[4] = {"", "B1", "B0", "B0B1"};
    for (int A = 0; A < 2; ++A)
        for (int bm = 0; bm < 4; ++bm)
            for (int C = 0; C < 2; ++C) {
                if (!A && !bm && !C) continue;
                std::string name = std::string(A ? "A" : "") + bobNames[bm] + (C ? "C" : "");
                Moment mo = e.get(A, bm, C);
                m[name] = {{"mean", mo.mean}, {"stderr", mo.stderr_}};
            }
    j["correlators"] = m;
    return j;
}

Json to_json(const FourPartiteCorrelation& f)
{
    return {{"layout", "x,a,b,y"}, {"p", f.p}};
}

Json to_json(const BipartiteConditional& c)
{
    return {{"layout", "x,y,a,b"}, {"p", c.p}, {"px", c.px}, {"py", c.py}};
}

std::string to_csv(const Correlation& c)
{
    std::string out = "x,y,z,a,b,c,p\n";
    for (std::size_t k = 0; k < c.data().size(); ++k) {
        Index i = c.unflatten(k);
        out += std::to_string(i.x) + "," + std::to_string(i.y) + "," + std::to_string(i.z) + "," + std::to_string(i.a) +
               "," + std::to_string(i.b) + "," + std::to_string(i.c) + "," + format_double(c.data()[k]) + "\n";
    }
    return out;
}

namespace {

std::string bob_name(BobKind k)
{
    switch (k) {
    case BobKind::FullBSM: return "full";
    case BobKind::PairwiseGrouping: return "pairzz_xx";
    case BobKind::PartialBSM3: return "partial3";
    }
    return "?";
}

}  // namespace

Json to_json(const QuantumSetup& q)
{
    if (q.bob.kind == BobKind::PairwiseGrouping) {
        // only the ZZ/XX grouping has a name
        BobMeasurement ref = BobMeasurement::pairwise_zz_xx();
        for (std::size_t y = 0; y < ref.projectors.size(); ++y)
            for (std::size_t b = 0; b < ref.projectors[y].size(); ++b)
                if ((ref.projectors[y][b] - q.bob.projectors[y][b]).norm() > 1e-12)
                    throw DomainError("only the ZZ/XX pairwise grouping can be serialized");
    }
    Json j;
    j["theta1"] = q.theta1;
    j["theta2"] = q.theta2;
    j["v1"] = q.v1;
    j["v2"] = q.v2;
    j["bob"] = bob_name(q.bob.kind);
    j["alice"] = Json::array({q.alice[0], q.alice[1]});
    j["charlie"] = Json::array({q.charlie[0], q.charlie[1]});
    return j;
}

QuantumSetup setup_from_json(const Json& doc)
{
    const Json& j = doc.is_object() && doc.contains("setup") ? doc.at("setup") : doc;
    QuantumSetup q;
    q.theta1 = number(field(j, "theta1", "$"), "$.theta1");
    q.theta2 = number(field(j, "theta2", "$"), "$.theta2");
    q.v1 = j.contains("v1") ? number(j["v1"], "$.v1") : 1.0;
    q.v2 = j.contains("v2") ? number(j["v2"], "$.v2") : 1.0;
    const Json& b = field(j, "bob", "$");
    if (!b.is_string()) throw DomainError("$.bob: expected full|pairzz_xx|partial3");
    std::string bs = b.get<std::string>();
    if (bs == "full") q.bob = BobMeasurement::full_bsm();
    else if (bs == "pairzz_xx") q.bob = BobMeasurement::pairwise_zz_xx();
    else if (bs == "partial3") q.bob = BobMeasurement::partial_bsm3();
    else throw DomainError("$.bob: unknown measurement '" + bs + "'");
    for (const char* key : {"alice", "charlie"}) {
        std::string path = std::string("$.") + key;
        const Json& s = field(j, key, "$");
        if (!s.is_array() || s.size() != 2) throw DomainError(path + ": expected two Bloch vectors");
        auto& dst = std::string(key) == "alice" ? q.alice : q.charlie;
        for (int x = 0; x < 2; ++x) {
            std::string px = path + "[" + std::to_string(x) + "]";
            if (!s[x].is_array() || s[x].size() != 3) throw DomainError(px + ": expected [x, y, z]");
            try {
                dst[x] = bloch(number(s[x][0], px), number(s[x][1], px), number(s[x][2], px));
            } catch (const DomainError& e) {
                throw DomainError(px + ": " + e.what());
            }
        }
    }
    return q;
}

Json parse_json_text(const std::string& text)
{
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // byte offset -> line/column
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else
                ++col;
        }
        throw DomainError("malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                          e.what());
    }
}

Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str());
}

}  // namespace biloc
