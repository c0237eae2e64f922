#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "ee/iteration.hpp"

namespace ee {

struct MeshSpec {
  std::string kind = "rectangle";  ///< rectangle | lshape | file
  int nx = 16, ny = 16;
  double width = 1.0, height = 1.0;
  int n = 8;                       ///< L-shape resolution
  std::string path;                ///< mesh file, relative to the config
  int refine = 0;                  ///< extra uniform refinements
};

struct EstimatesSpec {
  std::string centers = "default";  ///< default | corners | reentrant | points
  std::vector<Point> points;
  int levels = 6;
  double r0 = 0.0;                  ///< 0: a quarter of the diameter
  std::vector<double> t_list{2.0, 4.0, 8.0};
};

/// Validated run description. Everything the solver needs is re-derived from
/// `source`, which is also what the report hash covers.
struct RunConfig {
  nlohmann::json source;
  std::filesystem::path base_dir;
  int schema_version = 1;
  std::string model;                    ///< thermistor | nernst_planck | manufactured
  MeshSpec mesh;
  std::vector<std::string> dirichlet;
  SolverOptions solver;
  EstimatesSpec estimates;
  std::string output;
};

inline constexpr int kSchemaVersion = 1;

/// Throws ConfigError naming the offending field.
RunConfig parse_config(const nlohmann::json& source, std::filesystem::path base_dir = {});
/// Reads and parses a file; JSON syntax errors carry line and column.
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json read_json_file(const std::filesystem::path& path);

/// FNV-1a 64 of the compact dump (keys sorted) as 16 hex digits.
std::string config_hash(const nlohmann::json& source);

/// Value expression: a number or one of
///   {"type":"constant","value"}
///   {"type":"affine","c","cx","cy"}
///   {"type":"polynomial2","c","x","y","xx","xy","yy"}
///   {"type":"polar_power","origin":[x,y],"exponent","angle_offset","scale"}  scale r^a sin(a theta)
///   {"type":"sine_product","amplitude","kx","ky"}  amplitude sin(kx pi x) sin(ky pi y)
SpatialFunction parse_expression(const nlohmann::json& j, const std::string& field);
/// Registry function {"name": ..., <parameters>}.
ScalarFunction parse_function(const nlohmann::json& j, const std::string& field);

/// Boundary tagging from predicate names (left, right, bottom, top, all,
/// reentrant) against the mesh bounding box.
Mesh apply_dirichlet(const Mesh& mesh, const std::vector<std::string>& predicates);

Mesh build_mesh(const RunConfig& config);
std::unique_ptr<Model> build_model(const RunConfig& config);

/// Optional closed-form solutions keyed by component name.
std::map<std::string, SpatialFunction> exact_solutions(const RunConfig& config);

std::vector<Point> estimate_centers(const RunConfig& config, const Mesh& mesh);
std::vector<double> estimate_radii(const RunConfig& config, const Mesh& mesh);

}  // namespace ee
