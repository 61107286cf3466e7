#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "holspec/domain.hpp"
#include "holspec/potential.hpp"

namespace holspec {

// exit codes: 0 success, 2 config error, 3 a numerical flag tripped
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

struct RunConfig {
    nlohmann::json j;  // the full (merged) configuration; echoed into artifacts
};

// domain / potential specs shared by the CLI and tests
HolderSubgraphDomain parse_domain(const nlohmann::json& spec);
PotentialField parse_potential(const nlohmann::json& spec);

struct RunOutput {
    int exit_code = 0;
    std::string message;                 // diagnostic on failure
    std::vector<std::string> artifacts;  // files written
};

RunOutput run(const RunConfig& cfg);

}  // namespace holspec
