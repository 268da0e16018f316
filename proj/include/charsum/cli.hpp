#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "charsum/sumengine.hpp"

namespace charsum {

struct CliResult {
  int exit_code = 0;  // 0 all checks pass, 1 mathematical violation, 2 invalid input
  nlohmann::json report;
  std::string csv;
};

/// Executes one experiment configuration (command selected by the
/// `command` field: group | bound | sum | verify | sweep | lpoly).
/// Throws Error on invalid input; violations are reported in the result.
CliResult run_config(const nlohmann::json& config);

/// Reads `<dir>/<name>.json`.
nlohmann::json load_preset(const std::string& name, const std::string& presets_dir);

std::string artifact_version();

}  // namespace charsum
