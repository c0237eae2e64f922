#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "ee/config.hpp"

namespace ee {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

/// Everything report.json holds except timings: config echo and hash, mesh
/// summary, convergence, bounds and (for converged runs) the estimate
/// diagnostics, certificate, identities and errors against exact solutions.
nlohmann::json analyze_solution(const RunConfig& config, const Mesh& mesh, const Model& model,
                                const SystemSolution& solution);

/// Solves one configuration and writes report.json plus field_<c>.csv and
/// field_<c>.svg per component into out. Returns the exit code.
int run_solve(const RunConfig& config, const std::filesystem::path& out, std::ostream& log);

/// Solves on k successively refined meshes and writes study.csv / study.json.
/// Throws ContractError for k < 2.
int run_study(const RunConfig& config, int levels, const std::filesystem::path& out,
              std::ostream& log);

/// Cartesian sweep over JSON-pointer overrides of the config:
///   {"schema_version": 1, "parameters": [{"pointer": "/boundary/phi/cx", "values": [...]}]}
/// Each case is solved into out/case_NNN; summary.csv lists the outcomes.
int run_sweep(const RunConfig& config, const nlohmann::json& grid,
              const std::filesystem::path& out, std::ostream& log);

/// Named verification suite; writes results.json to out when given.
int run_verify(const std::string& suite, const std::filesystem::path& out, std::ostream& log);

}  // namespace ee
