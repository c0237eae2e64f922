#include "ee/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "ee/errors.hpp"
#include "ee/estimates.hpp"

namespace ee {

using nlohmann::json;

namespace {

std::string join(const std::string& field, const std::string& key) {
  return field.empty() ? key : field + "." + key;
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& field) {
  if (!obj.is_object())
    throw ConfigError("field '" + (field.empty() ? std::string("<root>") : field) +
                      "' must be an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) throw ConfigError("unknown field '" + join(field, key) + "'");
}

const json& require(const json& obj, const std::string& key, const std::string& field) {
  if (!obj.contains(key)) throw ConfigError("missing field '" + join(field, key) + "'");
  return obj.at(key);
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError("field '" + field + "' must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError("field '" + field + "' must be finite");
  return v;
}

double number_or(const json& obj, const std::string& key, const std::string& field, double fallback) {
  return obj.contains(key) ? number(obj.at(key), join(field, key)) : fallback;
}

int integer_or(const json& obj, const std::string& key, const std::string& field, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& j = obj.at(key);
  if (!j.is_number_integer()) throw ConfigError("field '" + join(field, key) + "' must be an integer");
  return j.get<int>();
}

std::string string_of(const json& j, const std::string& field) {
  if (!j.is_string()) throw ConfigError("field '" + field + "' must be a string");
  return j.get<std::string>();
}

Point point_of(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) throw ConfigError("field '" + field + "' must be [x, y]");
  return Point(number(j[0], field + "[0]"), number(j[1], field + "[1]"));
}

const std::set<std::string>& common_keys() {
  static const std::set<std::string> keys{"schema_version", "model",  "mesh",  "dirichlet",
                                          "solver",         "estimates", "output", "exact",
                                          "description"};
  return keys;
}

std::set<std::string> allowed_top(const std::string& model) {
  std::set<std::string> keys = common_keys();
  if (model == "thermistor") keys.insert({"boundary", "coefficients"});
  if (model == "nernst_planck") keys.insert({"boundary", "coefficients", "species", "u_min"});
  if (model == "manufactured") keys.insert({"source"});
  return keys;
}

}  // namespace

SpatialFunction parse_expression(const json& j, const std::string& field) {
  if (j.is_number()) {
    const double c = number(j, field);
    return [c](const Point&) { return c; };
  }
  if (!j.is_object()) throw ConfigError("field '" + field + "' must be a number or an expression");
  const std::string type = string_of(require(j, "type", field), join(field, "type"));
  if (type == "constant") {
    check_keys(j, {"type", "value"}, field);
    const double c = number(require(j, "value", field), join(field, "value"));
    return [c](const Point&) { return c; };
  }
  if (type == "affine") {
    check_keys(j, {"type", "c", "cx", "cy"}, field);
    const double c = number_or(j, "c", field, 0), cx = number_or(j, "cx", field, 0),
                 cy = number_or(j, "cy", field, 0);
    return [=](const Point& p) { return c + cx * p.x() + cy * p.y(); };
  }
  if (type == "polynomial2") {
    check_keys(j, {"type", "c", "x", "y", "xx", "xy", "yy"}, field);
    const double c = number_or(j, "c", field, 0), x = number_or(j, "x", field, 0),
                 y = number_or(j, "y", field, 0), xx = number_or(j, "xx", field, 0),
                 xy = number_or(j, "xy", field, 0), yy = number_or(j, "yy", field, 0);
    return [=](const Point& p) {
      return c + x * p.x() + y * p.y() + xx * p.x() * p.x() + xy * p.x() * p.y() +
             yy * p.y() * p.y();
    };
  }
  if (type == "polar_power") {
    check_keys(j, {"type", "origin", "exponent", "angle_offset", "scale"}, field);
    const Point o = j.contains("origin") ? point_of(j["origin"], join(field, "origin")) : Point::Zero();
    const double a = number(require(j, "exponent", field), join(field, "exponent"));
    const double offset = number_or(j, "angle_offset", field, 0), scale = number_or(j, "scale", field, 1);
    return [=](const Point& p) {
      const Point d = p - o;
      const double r = d.norm();
      if (r == 0.0) return 0.0;
      double theta = std::atan2(d.y(), d.x()) - offset;
      theta -= 2 * std::numbers::pi * std::floor(theta / (2 * std::numbers::pi));
      return scale * std::pow(r, a) * std::sin(a * theta);
    };
  }
  if (type == "sine_product") {
    check_keys(j, {"type", "amplitude", "kx", "ky"}, field);
    const double amp = number_or(j, "amplitude", field, 1), kx = number_or(j, "kx", field, 1),
                 ky = number_or(j, "ky", field, 1);
    return [=](const Point& p) {
      return amp * std::sin(kx * std::numbers::pi * p.x()) * std::sin(ky * std::numbers::pi * p.y());
    };
  }
  throw ConfigError("field '" + join(field, "type") + "': unknown expression type '" + type + "'");
}

ScalarFunction parse_function(const json& j, const std::string& field) {
  if (!j.is_object()) throw ConfigError("field '" + field + "' must be an object with a name");
  const std::string name = string_of(require(j, "name", field), join(field, "name"));
  std::map<std::string, double> params;
  for (const auto& [key, value] : j.items())
    if (key != "name") params[key] = number(value, join(field, key));
  try {
    return ScalarFunction::from_registry(name, params);
  } catch (const ConfigError& e) {
    throw ConfigError("field '" + field + "': " + e.what());
  }
}

RunConfig parse_config(const json& source, std::filesystem::path base_dir) {
  if (!source.is_object()) throw ConfigError("config root must be an object");
  RunConfig cfg;
  cfg.source = source;
  cfg.base_dir = std::move(base_dir);
  const json& version = require(source, "schema_version", "");
  if (!version.is_number_integer() || version.get<int>() != kSchemaVersion)
    throw ConfigError("field 'schema_version' must be " + std::to_string(kSchemaVersion));
  cfg.model = string_of(require(source, "model", ""), "model");
  if (cfg.model != "thermistor" && cfg.model != "nernst_planck" && cfg.model != "manufactured")
    throw ConfigError("field 'model': unknown model '" + cfg.model + "'");
  check_keys(source, allowed_top(cfg.model), "");

  const json& mesh = require(source, "mesh", "");
  check_keys(mesh, {"kind", "nx", "ny", "width", "height", "n", "path", "refine"}, "mesh");
  cfg.mesh.kind = string_of(require(mesh, "kind", "mesh"), "mesh.kind");
  cfg.mesh.nx = integer_or(mesh, "nx", "mesh", cfg.mesh.nx);
  cfg.mesh.ny = integer_or(mesh, "ny", "mesh", cfg.mesh.ny);
  cfg.mesh.width = number_or(mesh, "width", "mesh", cfg.mesh.width);
  cfg.mesh.height = number_or(mesh, "height", "mesh", cfg.mesh.height);
  cfg.mesh.n = integer_or(mesh, "n", "mesh", cfg.mesh.n);
  cfg.mesh.refine = integer_or(mesh, "refine", "mesh", 0);
  if (mesh.contains("path")) cfg.mesh.path = string_of(mesh["path"], "mesh.path");
  if (cfg.mesh.kind == "file" && cfg.mesh.path.empty()) throw ConfigError("missing field 'mesh.path'");
  if (cfg.mesh.kind != "rectangle" && cfg.mesh.kind != "lshape" && cfg.mesh.kind != "file")
    throw ConfigError("field 'mesh.kind': unknown mesh kind '" + cfg.mesh.kind + "'");
  if (cfg.mesh.refine < 0 || cfg.mesh.refine > 6)
    throw ConfigError("field 'mesh.refine' must lie in [0, 6]");

  const json& dirichlet = require(source, "dirichlet", "");
  if (!dirichlet.is_array() || dirichlet.empty())
    throw ConfigError("field 'dirichlet' must be a nonempty list of boundary predicates");
  for (std::size_t i = 0; i < dirichlet.size(); ++i) {
    const std::string f = "dirichlet[" + std::to_string(i) + "]";
    const std::string name = string_of(dirichlet[i], f);
    static const std::set<std::string> known{"left", "right", "bottom", "top", "all", "reentrant"};
    if (!known.count(name)) throw ConfigError("field '" + f + "': unknown boundary predicate '" + name + "'");
    cfg.dirichlet.push_back(name);
  }

  if (source.contains("solver")) {
    const json& s = source["solver"];
    check_keys(s, {"tol", "res_tol", "max_iter", "theta", "theta_min", "linear_tol"}, "solver");
    cfg.solver.tol = number_or(s, "tol", "solver", cfg.solver.tol);
    cfg.solver.res_tol = number_or(s, "res_tol", "solver", cfg.solver.res_tol);
    cfg.solver.max_iter = integer_or(s, "max_iter", "solver", cfg.solver.max_iter);
    cfg.solver.theta = number_or(s, "theta", "solver", cfg.solver.theta);
    cfg.solver.theta_min = number_or(s, "theta_min", "solver", cfg.solver.theta_min);
    cfg.solver.linear_tol = number_or(s, "linear_tol", "solver", cfg.solver.linear_tol);
    if (!(cfg.solver.tol > 0) || !(cfg.solver.res_tol > 0) || !(cfg.solver.linear_tol > 0))
      throw ConfigError("solver tolerances must be positive");
    if (cfg.solver.max_iter < 0) throw ConfigError("field 'solver.max_iter' must be >= 0");
    if (!(cfg.solver.theta > 0 && cfg.solver.theta <= 1))
      throw ConfigError("field 'solver.theta' must lie in (0, 1]");
    if (!(cfg.solver.theta_min > 0 && cfg.solver.theta_min <= cfg.solver.theta))
      throw ConfigError("field 'solver.theta_min' must lie in (0, theta]");
  }

  if (source.contains("estimates")) {
    const json& e = source["estimates"];
    check_keys(e, {"centers", "levels", "r0", "t_list"}, "estimates");
    if (e.contains("centers")) {
      const json& c = e["centers"];
      if (c.is_array()) {
        cfg.estimates.centers = "points";
        for (std::size_t i = 0; i < c.size(); ++i)
          cfg.estimates.points.push_back(point_of(c[i], "estimates.centers[" + std::to_string(i) + "]"));
        if (cfg.estimates.points.empty()) throw ConfigError("field 'estimates.centers' is empty");
      } else {
        cfg.estimates.centers = string_of(c, "estimates.centers");
        if (cfg.estimates.centers != "default" && cfg.estimates.centers != "corners" &&
            cfg.estimates.centers != "reentrant")
          throw ConfigError("field 'estimates.centers': unknown policy '" + cfg.estimates.centers + "'");
      }
    }
    cfg.estimates.levels = integer_or(e, "levels", "estimates", cfg.estimates.levels);
    if (cfg.estimates.levels < 4) throw ConfigError("field 'estimates.levels' must be >= 4");
    cfg.estimates.r0 = number_or(e, "r0", "estimates", 0.0);
    if (e.contains("t_list")) {
      const json& t = e["t_list"];
      if (!t.is_array()) throw ConfigError("field 'estimates.t_list' must be a list");
      cfg.estimates.t_list.clear();
      for (std::size_t i = 0; i < t.size(); ++i) {
        const double v = number(t[i], "estimates.t_list[" + std::to_string(i) + "]");
        if (v < 1) throw ConfigError("field 'estimates.t_list' entries must be >= 1");
        cfg.estimates.t_list.push_back(v);
      }
    }
  }

  if (source.contains("output")) {
    const json& o = source["output"];
    check_keys(o, {"directory"}, "output");
    if (o.contains("directory")) cfg.output = string_of(o["directory"], "output.directory");
  }

  // Constructing the model validates every expression and registry entry.
  build_model(cfg);
  exact_solutions(cfg);
  return cfg;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_json_file(path), path.parent_path());
}

std::string config_hash(const json& source) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : source.dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Mesh apply_dirichlet(const Mesh& mesh, const std::vector<std::string>& predicates) {
  Point lo = mesh.node(0), hi = mesh.node(0);
  for (const Point& p : mesh.nodes()) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double tol = 1e-9 * std::max(mesh.diameter(), 1.0);
  const std::vector<Point> corners = mesh.reentrant_corners();
  return tag_boundary(mesh, [&](const Point& p) {
    for (const std::string& name : predicates) {
      const bool hit = (name == "all") || (name == "left" && p.x() - lo.x() <= tol) ||
                       (name == "right" && hi.x() - p.x() <= tol) ||
                       (name == "bottom" && p.y() - lo.y() <= tol) ||
                       (name == "top" && hi.y() - p.y() <= tol);
      if (hit) return BoundaryTag::Dirichlet;
      if (name == "reentrant")
        for (const Point& c : corners)
          if (std::abs(p.x() - c.x()) <= tol || std::abs(p.y() - c.y()) <= tol)
            return BoundaryTag::Dirichlet;
    }
    return BoundaryTag::Neumann;
  });
}

Mesh build_mesh(const RunConfig& config) {
  const MeshSpec& spec = config.mesh;
  Mesh mesh = [&] {
    if (spec.kind == "rectangle") return build_rectangle(spec.nx, spec.ny, spec.width, spec.height);
    if (spec.kind == "lshape") return build_lshape(spec.n);
    const std::filesystem::path p = std::filesystem::path(spec.path).is_absolute()
                                        ? std::filesystem::path(spec.path)
                                        : config.base_dir / spec.path;
    return read_mesh_file(p.string());
  }();
  for (int k = 0; k < spec.refine; ++k) mesh = refine_uniform(mesh);
  mesh = apply_dirichlet(mesh, config.dirichlet);
  if (mesh.dirichlet_nodes().empty())
    throw ConfigError("field 'dirichlet' selects no boundary edge of the mesh");
  return mesh;
}

std::unique_ptr<Model> build_model(const RunConfig& config) {
  const json& src = config.source;
  try {
    if (config.model == "thermistor") {
      ThermistorParams p;
      const json& b = require(src, "boundary", "");
      check_keys(b, {"phi", "temperature"}, "boundary");
      p.phi_boundary = parse_expression(require(b, "phi", "boundary"), "boundary.phi");
      p.temperature_boundary =
          parse_expression(require(b, "temperature", "boundary"), "boundary.temperature");
      if (src.contains("coefficients")) {
        const json& c = src["coefficients"];
        check_keys(c, {"sigma", "kappa", "heat_source"}, "coefficients");
        if (c.contains("sigma")) p.sigma = parse_function(c["sigma"], "coefficients.sigma");
        if (c.contains("kappa")) p.kappa = parse_function(c["kappa"], "coefficients.kappa");
        if (c.contains("heat_source"))
          p.heat_source = parse_expression(c["heat_source"], "coefficients.heat_source");
      }
      return std::make_unique<ThermistorModel>(p);
    }
    if (config.model == "manufactured") {
      ThermistorParams p;
      p.heat_source = parse_expression(require(src, "source", ""), "source");
      const json& exact = require(src, "exact", "");
      check_keys(exact, {"u"}, "exact");
      p.temperature_boundary = parse_expression(require(exact, "u", "exact"), "exact.u");
      return std::make_unique<ThermistorModel>(p);
    }
    NernstPlanckParams p;
    const json& b = require(src, "boundary", "");
    check_keys(b, {"phi", "temperature"}, "boundary");
    p.phi_boundary = parse_expression(require(b, "phi", "boundary"), "boundary.phi");
    p.temperature_boundary =
        parse_expression(require(b, "temperature", "boundary"), "boundary.temperature");
    if (src.contains("coefficients")) {
      const json& c = src["coefficients"];
      check_keys(c, {"permittivity", "kappa"}, "coefficients");
      if (c.contains("permittivity"))
        p.permittivity = parse_function(c["permittivity"], "coefficients.permittivity");
      if (c.contains("kappa")) p.kappa = parse_function(c["kappa"], "coefficients.kappa");
    }
    if (src.contains("u_min")) p.u_min = number(src["u_min"], "u_min");
    const json& species = require(src, "species", "");
    if (!species.is_array() || species.empty())
      throw ConfigError("field 'species' must be a nonempty list");
    for (std::size_t i = 0; i < species.size(); ++i) {
      const std::string f = "species[" + std::to_string(i) + "]";
      check_keys(species[i], {"charge", "diffusivity", "boundary"}, f);
      Species s;
      s.charge = number(require(species[i], "charge", f), f + ".charge");
      if (species[i].contains("diffusivity"))
        s.diffusivity = parse_function(species[i]["diffusivity"], f + ".diffusivity");
      s.boundary = parse_expression(require(species[i], "boundary", f), f + ".boundary");
      p.species.push_back(s);
    }
    return std::make_unique<NernstPlanckModel>(p);
  } catch (const ModelError& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
}

std::map<std::string, SpatialFunction> exact_solutions(const RunConfig& config) {
  std::map<std::string, SpatialFunction> out;
  if (!config.source.contains("exact")) return out;
  const json& exact = config.source["exact"];
  if (!exact.is_object()) throw ConfigError("field 'exact' must be an object");
  const auto model = build_model(config);
  std::set<std::string> names;
  for (int i = 0; i < model->component_count(); ++i) names.insert(model->component_name(i));
  for (const auto& [key, value] : exact.items()) {
    if (!names.count(key)) throw ConfigError("field 'exact." + key + "' names no component");
    out[key] = parse_expression(value, "exact." + key);
  }
  return out;
}

std::vector<Point> estimate_centers(const RunConfig& config, const Mesh& mesh) {
  const std::string& policy = config.estimates.centers;
  if (policy == "points") return config.estimates.points;
  if (policy == "reentrant") {
    if (mesh.reentrant_corners().empty())
      throw ConfigError("field 'estimates.centers': mesh has no reentrant corner");
    return mesh.reentrant_corners();
  }
  if (policy == "corners") {
    std::vector<Point> out;
    for (int c : mesh.corner_nodes()) out.push_back(mesh.node(c));
    return out;
  }
  return default_centers(mesh);
}

std::vector<double> estimate_radii(const RunConfig& config, const Mesh& mesh) {
  return dyadic_radii(mesh, config.estimates.levels, config.estimates.r0);
}

}  // namespace ee
