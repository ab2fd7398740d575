#pragma once

#include "riskdp/machine.hpp"
#include "riskdp/mdp.hpp"
#include "riskdp/pomdp.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace riskdp::cli {

using nlohmann::json;

/// Exit statuses of every command.
enum ExitCode : int { kOk = 0, kUnexpected = 1, kValidation = 2, kResource = 3 };

struct RunConfig {
    std::string command;
    std::filesystem::path input;
    std::filesystem::path out = ".";
    std::uint64_t seed = 0;
    std::size_t runs = 100000;
    std::size_t grid = 101;
    std::optional<double> gamma;
    /// m1,m2,M1,M2,p,R,T
    std::optional<std::string> params;
    std::size_t workers = 1;
    std::size_t budget = 1'000'000;
    std::size_t bins = 100;
};

/// Shortest text that parses back to the same double (17 significant digits).
std::string format_double(double x);

json read_document(const std::filesystem::path& path);

/// Each throws ValidationError with a JSON-pointer style location on schema violations.
FiniteHorizonMdp parse_mdp(const json& doc);
FinitePomdp parse_pomdp(const json& doc);
machine::MachineModel parse_machine(const json& doc);
TransitionRiskMapping parse_risk(const json& node, const std::string& where);

/// "m1,m2,M1,M2,p,R,T" with the given gamma.
machine::MachineModel parse_params(const std::string& text, double gamma);

int solve_mdp_cmd(const RunConfig& cfg);
int solve_pomdp_cmd(const RunConfig& cfg);
int machine_demo_cmd(const RunConfig& cfg);
int machine_simulate_cmd(const RunConfig& cfg);

/// Parses argv, dispatches, and maps errors to exit codes (diagnostics go to stderr).
int run(int argc, char** argv);

} // namespace riskdp::cli
