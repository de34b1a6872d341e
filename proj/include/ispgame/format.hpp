#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace ispgame {

// %.12g rendering used for every number the CLI and CSV writers emit.
std::string fmt12(double value);

// Pretty-printed JSON (two-space indent) with floats rendered by fmt12 and
// non-finite floats as null.
std::string dump_json(const nlohmann::json& doc);

}  // namespace ispgame
