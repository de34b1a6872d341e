#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ispgame/game.hpp"

namespace ispgame {

using ParamMap = std::map<std::string, double>;

// Numeric field names a scenario kind takes, in file order.
const std::vector<std::string>& param_names(ScenarioKind kind);

// Builds a scenario; the keys of params must match param_names(kind) exactly.
Scenario make_scenario(ScenarioKind kind, const ParamMap& params);
ParamMap scenario_params(const Scenario& s);

// {"kind": ..., "params": {...}, "notes": optional}
Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const Scenario& s);

Scenario load_scenario(const std::string& path);

}  // namespace ispgame
