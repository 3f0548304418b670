#pragma once

#include <string>

#include "json.hpp"
#include "mjsre/scenario.hpp"

namespace mjsre::cli {

/// Reads a scenario description (JSON). Probabilities off by at most 1e-9
/// are renormalized; anything else invalid throws ConfigError naming the
/// offending field, or the line and column of a syntax error.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& text, const std::string& origin = "<string>");

/// Inverse of parse_scenario; used for run manifests.
nlohmann::json scenario_to_json(const Scenario& scenario);

}  // namespace mjsre::cli
