#ifndef AODV_JSON_IO_HPP
#define AODV_JSON_IO_HPP

#include <json.hpp>

#include "aodv/scenario.hpp"

namespace aodv {

// ordered_json keeps insertion order, so serialized artifacts are
// byte-stable across runs
using json = nlohmann::ordered_json;

json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const json& j);  // throws ScenarioError w/ field path

Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& s, const std::string& path);

json trace_to_json(const std::vector<TraceStep>& steps);
json run_to_json(const Scenario& s, const ScenarioRun& run);
json verdict_to_json(const Verdict& v, const ExplorationConfig& cfg);

}  // namespace aodv

#endif
