#include "ispgame/scenario_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "ispgame/errors.hpp"

namespace ispgame {
namespace {

double get(const ParamMap& params, const std::string& key) { return params.at(key); }

}  // namespace

const std::vector<std::string>& param_names(ScenarioKind kind) {
  static const std::vector<std::string> communal{"D_max", "d", "p_s"};
  static const std::vector<std::string> split{"D_max_1", "d_1", "D_max_2", "d_2", "p_s"};
  static const std::vector<std::string> pwl{"D_max", "D_theta", "d_max", "d_theta", "p_s"};
  static const std::vector<std::string> smooth{"D_max", "p_max", "alpha", "p_s"};
  static const std::vector<std::string> smooth_split{"D_max_1", "D_max_2", "p_max", "alpha", "p_s"};
  static const std::vector<std::string> eyeball{"D_max_a", "D_max_b", "p_max", "alpha",
                                                "Phi_a", "Phi_b", "p_t"};
  switch (kind) {
    case ScenarioKind::communal_linear: return communal;
    case ScenarioKind::split_linear_bandwidth:
    case ScenarioKind::split_linear_content: return split;
    case ScenarioKind::pwl_communal: return pwl;
    case ScenarioKind::smooth_communal: return smooth;
    case ScenarioKind::smooth_split: return smooth_split;
    case ScenarioKind::eyeball_transit: return eyeball;
  }
  throw ValidationError("unknown scenario kind");
}

Scenario make_scenario(ScenarioKind kind, const ParamMap& params) {
  const auto& names = param_names(kind);
  for (const auto& name : names) {
    auto it = params.find(name);
    if (it == params.end()) {
      throw ValidationError("params: missing field '" + name + "' for kind " +
                            std::string(to_string(kind)));
    }
    if (!std::isfinite(it->second)) {
      throw ValidationError("params: field '" + name + "' must be a finite number");
    }
  }
  const std::set<std::string> allowed(names.begin(), names.end());
  for (const auto& [key, value] : params) {
    if (!allowed.count(key)) {
      throw ValidationError("params: unknown field '" + key + "' for kind " +
                            std::string(to_string(kind)));
    }
  }

  switch (kind) {
    case ScenarioKind::communal_linear:
      return CommunalLinearGame{LinearDemand(get(params, "D_max"), get(params, "d")),
                                get(params, "p_s")};
    case ScenarioKind::split_linear_bandwidth:
    case ScenarioKind::split_linear_content:
      return SplitLinearGame{
          SplitLinearDemand{LinearDemand(get(params, "D_max_1"), get(params, "d_1")),
                            LinearDemand(get(params, "D_max_2"), get(params, "d_2"))},
          kind == ScenarioKind::split_linear_bandwidth ? Factoring::bandwidth : Factoring::content,
          get(params, "p_s")};
    case ScenarioKind::pwl_communal:
      return PwlCommunalGame{PwlConvexDemand(get(params, "D_max"), get(params, "D_theta"),
                                             get(params, "d_max"), get(params, "d_theta")),
                             get(params, "p_s")};
    case ScenarioKind::smooth_communal:
      return SmoothCommunalGame{
          SmoothConvexDemand(get(params, "D_max"), get(params, "p_max"), get(params, "alpha")),
          get(params, "p_s")};
    case ScenarioKind::smooth_split:
      return SmoothSplitGame(get(params, "D_max_1"), get(params, "D_max_2"), get(params, "p_max"),
                             get(params, "alpha"), get(params, "p_s"));
    case ScenarioKind::eyeball_transit:
      return EyeballTransitGame(get(params, "D_max_a"), get(params, "D_max_b"),
                                get(params, "p_max"), get(params, "alpha"), get(params, "Phi_a"),
                                get(params, "Phi_b"), get(params, "p_t"));
  }
  throw ValidationError("unknown scenario kind");
}

ParamMap scenario_params(const Scenario& s) {
  struct Visitor {
    ParamMap operator()(const CommunalLinearGame& g) const {
      return {{"D_max", g.demand.max_demand()}, {"d", g.demand.sensitivity()},
              {"p_s", g.side_payment}};
    }
    ParamMap operator()(const SplitLinearGame& g) const {
      return {{"D_max_1", g.demand.first.max_demand()}, {"d_1", g.demand.first.sensitivity()},
              {"D_max_2", g.demand.second.max_demand()}, {"d_2", g.demand.second.sensitivity()},
              {"p_s", g.side_payment}};
    }
    ParamMap operator()(const PwlCommunalGame& g) const {
      return {{"D_max", g.demand.max_demand()}, {"D_theta", g.demand.threshold_demand()},
              {"d_max", g.demand.max_sensitivity()}, {"d_theta", g.demand.threshold_sensitivity()},
              {"p_s", g.side_payment}};
    }
    ParamMap operator()(const SmoothCommunalGame& g) const {
      return {{"D_max", g.demand.max_demand()}, {"p_max", g.demand.max_price()},
              {"alpha", g.demand.exponent()}, {"p_s", g.side_payment}};
    }
    ParamMap operator()(const SmoothSplitGame& g) const {
      return {{"D_max_1", g.first().max_demand()}, {"D_max_2", g.second().max_demand()},
              {"p_max", g.first().max_price()}, {"alpha", g.first().exponent()},
              {"p_s", g.side_payment()}};
    }
    ParamMap operator()(const EyeballTransitGame& g) const {
      return {{"D_max_a", g.demand_a().max_demand()}, {"D_max_b", g.demand_b().max_demand()},
              {"p_max", g.max_price()}, {"alpha", g.exponent()},
              {"Phi_a", g.miss_fraction_a()}, {"Phi_b", g.miss_fraction_b()},
              {"p_t", g.transit_price()}};
    }
  };
  return std::visit(Visitor{}, s);
}

Scenario scenario_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ValidationError("/: scenario must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "kind" && key != "params" && key != "notes") {
      throw ValidationError("/" + key + ": unknown top-level key");
    }
  }
  if (!doc.contains("kind") || !doc["kind"].is_string()) {
    throw ValidationError("/kind: required string");
  }
  if (!doc.contains("params") || !doc["params"].is_object()) {
    throw ValidationError("/params: required object");
  }
  if (doc.contains("notes") && !doc["notes"].is_string()) {
    throw ValidationError("/notes: must be a string");
  }
  ScenarioKind kind;
  try {
    kind = parse_scenario_kind(doc["kind"].get<std::string>());
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("/kind: ") + e.what());
  }
  const auto& names = param_names(kind);
  ParamMap params;
  for (const auto& [key, value] : doc["params"].items()) {
    if (std::find(names.begin(), names.end(), key) == names.end()) {
      throw ValidationError("/params/" + key + ": unknown field for kind " +
                            std::string(to_string(kind)));
    }
    if (!value.is_number()) throw ValidationError("/params/" + key + ": must be a number");
    params[key] = value.get<double>();
  }
  for (const auto& name : names) {
    if (!params.count(name)) throw ValidationError("/params/" + name + ": missing field");
  }
  try {
    return make_scenario(kind, params);
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("/params: ") + e.what());
  }
}

nlohmann::json scenario_to_json(const Scenario& s) {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : scenario_params(s)) params[k] = v;
  return {{"kind", std::string(to_string(kind_of(s)))}, {"params", params}};
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path + ": cannot open scenario file");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path + ": malformed JSON: " + e.what());
  }
  try {
    return scenario_from_json(doc);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

}  // namespace ispgame
