#pragma once

#include "biloc/correlators.hpp"
#include "biloc/lp.hpp"
#include "biloc/scenario.hpp"
#include "biloc/util.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace biloc {

// Alice/Charlie strategies are packed as 2 alpha0 + alpha1; Bob's response is stochastic.
struct BilocalModel {
    Scenario scenario;
    std::array<double, 4> rho1{}, rho2{};
    std::vector<double> bob;  // [(alpha*4 + gamma) * inputs + y] * outputs + b

    explicit BilocalModel(Scenario s = Scenario::s14());
    double& response(int alpha, int gamma, int y, int b);
    double response(int alpha, int gamma, int y, int b) const;
    static BilocalModel from_weights(const WeightTable& w);  // conditionalises q_{abg} = q_a q_g q_{b|ag}
};

Correlation model_to_correlation(const BilocalModel& m);
WeightTable model_to_weights(const BilocalModel& m);

struct SearchConfig {
    int restarts = 64;
    int max_rounds = 500;
    double tol = 1e-10;  // squared L2 success threshold
    std::uint64_t seed = 0;
};

enum class Verdict { Bilocal, NonBilocal, Inconclusive };
std::string to_string(Verdict v);

struct Certificate {
    Verdict verdict = Verdict::Inconclusive;
    double distance = kInf;  // squared L2 between model and target
    double linf = kInf;
    std::optional<BilocalModel> model;
    std::string reason;      // for NonBilocal: which test certified it
    double lower = 0, upper = 1;
    int restarts_used = 0;
    int nodes = 0;           // relaxation nodes explored
};

Certificate heuristic_search(const Correlation& target, const SearchConfig& cfg = {});

struct RelaxConfig {
    int depth = 16;           // maximum number of splits along a branch
    int max_nodes = 200000;
};

Certificate relaxation_bound(const Correlation& target, const RelaxConfig& cfg = {});

// Fast certificates first (signaling, Alice-Charlie correlation, sqrt inequality), then the relaxation.
Certificate certify_nonbilocal(const Correlation& target, const RelaxConfig& cfg = {});

struct ThresholdConfig {
    SearchConfig search;
    RelaxConfig relax;
    double width = 1e-3;
    double vmin = 0, vmax = 1;
};

struct ThresholdResult {
    double lower = 0, upper = 1;
    bool bracketed = true;
    Verdict verdict = Verdict::Bilocal;  // Inconclusive if bounds cross or an endpoint failed
};

// Generic bisection on a monotone predicate pair; exposed so other families (e.g. efficiency) can reuse it.
ThresholdResult bisect_threshold(const std::function<bool(double)>& explained,
                                 const std::function<bool(double)>& certified, double lo, double hi, double width);

ThresholdResult visibility_threshold(const std::function<Correlation(double)>& family, const ThresholdConfig& cfg = {});

// Local polytope membership over all deterministic (alpha, beta, gamma).
struct LocalResult {
    bool local = false;
    std::optional<WeightTable> weights;
    LpStatus status = LpStatus::Failed;
};
LocalResult local_membership(const Correlation& c);

}  // namespace biloc
