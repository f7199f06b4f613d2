#pragma once

#include "biloc/correlators.hpp"
#include "biloc/feasibility.hpp"
#include "biloc/quantum.hpp"
#include "biloc/scenario.hpp"
#include "biloc/simulators.hpp"
#include "biloc/trilocality.hpp"

#include <json.hpp>

#include <string>

namespace biloc {

using Json = nlohmann::ordered_json;

Json to_json(const Correlation& c);
// DomainError with the offending JSON path on malformed input.
Correlation correlation_from_json(const Json& j);

// one row per (x,y,z,a,b,c) plus probability
std::string to_csv(const Correlation& c);

Json to_json(const QuantumSetup& q);
QuantumSetup setup_from_json(const Json& j);

Json to_json(const BilocalModel& m);
BilocalModel model_from_json(const Json& j);

Json to_json(const Certificate& c);
Json to_json(const TableDecomposition& d);
Json to_json(const SimEstimate& e);
Json to_json(const FourPartiteCorrelation& f);
Json to_json(const BipartiteConditional& c);

Json parse_json_text(const std::string& text);  // DomainError with line/column
Json read_json_file(const std::string& path);

// %.17g
std::string format_double(double v);

}  // namespace biloc
