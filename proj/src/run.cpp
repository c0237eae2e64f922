#include "ee/run.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "ee/certificate.hpp"
#include "ee/errors.hpp"
#include "ee/output.hpp"
#include "ee/parallel.hpp"

namespace ee {

using nlohmann::json;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double max_edge_length(const Mesh& mesh) {
  double h = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangle(t);
    for (int k = 0; k < 3; ++k)
      h = std::max(h, (mesh.node(tri[k]) - mesh.node(tri[(k + 1) % 3])).norm());
  }
  return h;
}

json mesh_summary(const RunConfig& config, const Mesh& mesh) {
  return {{"kind", config.mesh.kind},
          {"nodes", mesh.node_count()},
          {"triangles", mesh.triangle_count()},
          {"dirichlet_nodes", mesh.dirichlet_nodes().size()},
          {"h", max_edge_length(mesh)}};
}

template <typename Fn>
json guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    return json{{"error", e.what()}};
  }
}

double dissipation_mass(const CoefficientSet& coeffs, const std::vector<Field>& fields) {
  const Mesh& mesh = fields.front().mesh();
  const Eigen::VectorXd d = dissipation_density(coeffs, fields);
  double mass = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) mass += mesh.area(t) * std::abs(d[t]);
  return mass;
}

json estimate_section(const RunConfig& config, const Mesh& mesh, const Model& model,
                      const std::vector<Field>& fields) {
  const std::vector<Point> centers = estimate_centers(config, mesh);
  const std::vector<double> radii = estimate_radii(config, mesh);
  json grad = json::object(), osc = json::object();
  double min_grad_beta = std::numeric_limits<double>::infinity();
  double min_hoelder = std::numeric_limits<double>::infinity();
  for (int i = 0; i < model.component_count(); ++i) {
    json g = json::array(), o = json::array();
    for (const Point& c : centers) {
      g.push_back(guarded([&] {
        const DecayReport r = gradient_energy_decay(fields[i], c, radii);
        if (i < model.energy_index()) min_grad_beta = std::min(min_grad_beta, r.beta);
        return to_json(r);
      }));
      o.push_back(guarded([&] {
        const DecayReport r = oscillation_hoelder(fields[i], {c}, radii).front();
        if (i < model.energy_index()) min_hoelder = std::min(min_hoelder, r.beta);
        return to_json(r);
      }));
    }
    grad[model.component_name(i)] = g;
    osc[model.component_name(i)] = o;
  }
  json diss = json::array();
  double min_pi_beta = std::numeric_limits<double>::infinity();
  for (const Point& c : centers) {
    diss.push_back(guarded([&] {
      const DecayReport r = dissipation_decay(model, fields, {c}, radii).front();
      if (r.fitted) min_pi_beta = std::min(min_pi_beta, r.beta);
      return to_json(r);
    }));
  }
  const auto finite_or_null = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json capacitary{{"min_dissipation_beta", finite_or_null(min_pi_beta)},
                  {"min_gradient_beta", finite_or_null(min_grad_beta)},
                  {"min_hoelder_exponent", finite_or_null(min_hoelder)}};
  if (std::isfinite(min_pi_beta) && std::isfinite(min_grad_beta))
    capacitary["cross_check"] = min_pi_beta >= min_grad_beta - 0.15;
  return {{"radii", radii},
          {"gradient_energy", grad},
          {"oscillation", osc},
          {"dissipation", diss},
          {"capacitary", capacitary}};
}

json identity_section(const Model& model, const std::vector<Field>& fields,
                      const BoundaryData& boundary, const SolverOptions& options) {
  const Mesh& mesh = fields.front().mesh();
  const std::vector<Field> ext = harmonic_initial_guess(mesh, boundary);
  json galerkin = json::object();
  bool ok = true;
  for (int i = 0; i < model.component_count(); ++i) {
    const WeakResidual w = galerkin_identity(model, fields, ext[i], i);
    ok = ok && w.relative() <= options.res_tol;
    galerkin[model.component_name(i)] = to_json(w);
  }
  json trunc = json::array();
  for (const auto& c : truncation_checks(model, fields, ext[model.energy_index()])) {
    ok = ok && c.residual.value <= options.res_tol * c.residual.scale;
    trunc.push_back({{"level", c.level}, {"residual", to_json(c.residual)}});
  }
  return {{"galerkin", galerkin}, {"truncation", trunc}, {"holds", ok}};
}

std::vector<std::pair<double, double>> solution_box(const std::vector<Field>& fields) {
  std::vector<std::pair<double, double>> box;
  for (const Field& f : fields) box.emplace_back(f.values().minCoeff(), f.values().maxCoeff());
  return box;
}

}  // namespace

json analyze_solution(const RunConfig& config, const Mesh& mesh, const Model& model,
                      const SystemSolution& solution) {
  const BoundaryData boundary = model.boundary_values(mesh);
  json report{{"schema_version", kSchemaVersion},
              {"config", config.source},
              {"config_hash", config_hash(config.source)},
              {"model", config.model},
              {"mesh", mesh_summary(config, mesh)},
              {"components", json::array()},
              {"convergence", to_json(solution.report)},
              {"bounds", to_json(linf_bounds(model, solution.fields, boundary))}};
  for (int i = 0; i < model.component_count(); ++i)
    report["components"].push_back(model.component_name(i));
  report["data_magnitude"] = model.data_magnitude(mesh);
  if (solution.report.status != Status::Converged) return report;

  const std::vector<Field>& fields = solution.fields;
  report["dissipation_mass"] = guarded([&] { return json(dissipation_mass(model, fields)); });
  json norms = json::object();
  const auto lp = lp_gradient_norms(fields, config.estimates.t_list);
  for (int i = 0; i < model.component_count(); ++i) norms[model.component_name(i)] = lp[i];
  report["gradient_norms"] = {{"t", config.estimates.t_list}, {"values", norms}};
  report["estimates"] = guarded([&] { return estimate_section(config, mesh, model, fields); });
  report["identities"] = guarded([&] { return identity_section(model, fields, boundary, config.solver); });
  report["certificate"] = guarded([&] { return to_json(certify_growth(model, solution_box(fields))); });
  if (const auto* np = dynamic_cast<const NernstPlanckModel*>(&model))
    report["entropy"] = guarded([&] { return to_json(entropy_residual(*np, fields)); });

  const auto exact = exact_solutions(config);
  if (!exact.empty()) {
    json errors = json::object();
    for (int i = 0; i < model.component_count(); ++i) {
      const auto it = exact.find(model.component_name(i));
      if (it == exact.end()) continue;
      const Field ex = interpolate(mesh, it->second);
      errors[it->first] = {{"max_nodal", (fields[i].values() - ex.values()).lpNorm<Eigen::Infinity>()},
                           {"l2", l2_error(fields[i], it->second)},
                           {"h1", h1_error(fields[i], it->second)}};
    }
    report["errors"] = errors;
  }
  return report;
}

int run_solve(const RunConfig& config, const std::filesystem::path& out, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  const Mesh mesh = build_mesh(config);
  const std::unique_ptr<Model> model = build_model(config);
  const SystemSolution solution = solve_system(*model, mesh, model->boundary_values(mesh), config.solver);
  const double solve_time = seconds_since(t0);
  json report = analyze_solution(config, mesh, *model, solution);
  report["timings"] = {{"solve_seconds", solve_time}, {"total_seconds", seconds_since(t0)}};

  std::filesystem::create_directories(out);
  write_json(out / "report.json", report);
  for (int i = 0; i < model->component_count(); ++i) {
    const std::string name = model->component_name(i);
    write_field_csv(out / ("field_" + name + ".csv"), solution.fields[i]);
    write_field_svg(out / ("field_" + name + ".svg"), solution.fields[i], name);
  }
  const ConvergenceReport& r = solution.report;
  log << "status " << to_string(r.status) << " after " << r.iterations << " iterations, change "
      << format_number(r.change) << ", min u " << format_number(r.min_u) << "\n";
  if (!r.message.empty()) log << "note: " << r.message << "\n";
  return r.status == Status::Converged ? kExitOk : kExitNumerical;
}

int run_study(const RunConfig& config, int levels, const std::filesystem::path& out,
              std::ostream& log) {
  if (levels < 2) throw ContractError("study needs at least 2 refinement levels");
  const std::unique_ptr<Model> model = build_model(config);
  const auto exact = exact_solutions(config);
  const int n = model->component_count();

  std::vector<std::string> columns{"level", "h", "nodes", "status", "iterations"};
  std::vector<std::string> error_columns;
  for (int i = 0; i < n; ++i) {
    const std::string c = model->component_name(i);
    const std::string prefix = exact.count(c) ? "err" : "diff";
    for (const char* kind : {"_l2_", "_h1_", "_max_"}) error_columns.push_back(prefix + kind + c);
  }
  columns.insert(columns.end(), error_columns.begin(), error_columns.end());
  columns.push_back("beta_grad");
  columns.push_back("beta_pi");

  std::vector<json> rows;
  Mesh mesh = build_mesh(config);
  std::optional<Mesh> coarse_mesh;
  std::vector<Field> coarse;
  int exit_code = kExitOk;
  for (int level = 0; level < levels; ++level) {
    if (level > 0) mesh = refine_uniform(mesh);
    json row{{"level", level}, {"h", max_edge_length(mesh)}, {"nodes", mesh.node_count()}};
    SystemSolution sol;
    try {
      sol = solve_system(*model, mesh, model->boundary_values(mesh), config.solver);
    } catch (const Error& e) {
      sol.report.status = Status::Diverged;
      sol.report.message = e.what();
    }
    row["status"] = to_string(sol.report.status);
    row["iterations"] = sol.report.iterations;
    if (sol.report.status != Status::Converged) {
      row["message"] = sol.report.message;
      rows.push_back(row);
      exit_code = kExitNumerical;
      break;
    }
    for (int i = 0; i < n; ++i) {
      const std::string c = model->component_name(i);
      const auto it = exact.find(c);
      if (it != exact.end()) {
        const Field ex = interpolate(mesh, it->second);
        row["err_l2_" + c] = l2_error(sol.fields[i], it->second);
        row["err_h1_" + c] = h1_error(sol.fields[i], it->second);
        row["err_max_" + c] = (sol.fields[i].values() - ex.values()).lpNorm<Eigen::Infinity>();
      } else if (coarse_mesh) {
        // refine_uniform keeps coarse node ids, so restriction is a prefix.
        const int nc = coarse_mesh->node_count();
        const Field d(*coarse_mesh, sol.fields[i].values().head(nc) - coarse[i].values());
        row["diff_l2_" + c] = l2_norm(d);
        row["diff_h1_" + c] = h1_seminorm(d);
        row["diff_max_" + c] = d.values().lpNorm<Eigen::Infinity>();
      }
    }
    const std::vector<Point> centers = estimate_centers(config, mesh);
    const std::vector<double> radii = estimate_radii(config, mesh);
    if (!centers.empty()) {
      try {
        row["beta_grad"] = gradient_energy_decay(sol.fields[0], centers.front(), radii).beta;
      } catch (const Error&) {
      }
      try {
        const DecayReport d = dissipation_decay(*model, sol.fields, {centers.front()}, radii).front();
        if (d.fitted) row["beta_pi"] = d.beta;
      } catch (const Error&) {
      }
    }
    rows.push_back(row);
    coarse_mesh = mesh;
    coarse = std::vector<Field>();
    for (const Field& f : sol.fields) coarse.emplace_back(*coarse_mesh, f.values());
    log << "level " << level << ": h " << format_number(row["h"].get<double>()) << ", "
        << to_string(sol.report.status) << " in " << sol.report.iterations << " iterations\n";
  }

  json orders = json::array();
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (rows[k]["status"] != "converged") break;
    json o{{"level", "order_" + std::to_string(k)}};
    const double ratio = rows[k - 1]["h"].get<double>() / rows[k]["h"].get<double>();
    for (const std::string& c : error_columns) {
      if (!rows[k].contains(c) || !rows[k - 1].contains(c)) continue;
      const double a = rows[k - 1][c].get<double>(), b = rows[k][c].get<double>();
      if (a > 0 && b > 0) o[c] = std::log(a / b) / std::log(ratio);
    }
    orders.push_back(o);
  }

  std::ostringstream csv;
  for (std::size_t c = 0; c < columns.size(); ++c) csv << (c ? "," : "") << columns[c];
  csv << "\n";
  const auto cell = [](const json& v) -> std::string {
    if (v.is_number_float()) return format_number(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  };
  for (const json& row : rows) {
    for (std::size_t c = 0; c < columns.size(); ++c)
      csv << (c ? "," : "") << (row.contains(columns[c]) ? cell(row[columns[c]]) : "");
    csv << "\n";
  }
  for (const json& o : orders) {
    for (std::size_t c = 0; c < columns.size(); ++c)
      csv << (c ? "," : "") << (o.contains(columns[c]) ? cell(o[columns[c]]) : "");
    csv << "\n";
  }
  std::filesystem::create_directories(out);
  write_text(out / "study.csv", csv.str());
  write_json(out / "study.json", {{"schema_version", kSchemaVersion},
                                  {"config_hash", config_hash(config.source)},
                                  {"rows", rows},
                                  {"orders", orders}});
  log << csv.str();
  return exit_code;
}

int run_sweep(const RunConfig& config, const json& grid, const std::filesystem::path& out,
              std::ostream& log) {
  if (!grid.is_object() || !grid.contains("parameters") || !grid["parameters"].is_array())
    throw ConfigError("grid: field 'parameters' must be a list");
  if (!grid.contains("schema_version") || grid["schema_version"] != kSchemaVersion)
    throw ConfigError("grid: field 'schema_version' must be " + std::to_string(kSchemaVersion));
  std::vector<json::json_pointer> pointers;
  std::vector<std::vector<json>> values;
  for (std::size_t i = 0; i < grid["parameters"].size(); ++i) {
    const json& p = grid["parameters"][i];
    const std::string f = "grid.parameters[" + std::to_string(i) + "]";
    if (!p.is_object() || !p.contains("pointer") || !p["pointer"].is_string())
      throw ConfigError("field '" + f + ".pointer' must be a JSON pointer string");
    if (!p.contains("values") || !p["values"].is_array() || p["values"].empty())
      throw ConfigError("field '" + f + ".values' must be a nonempty list");
    try {
      pointers.emplace_back(p["pointer"].get<std::string>());
    } catch (const json::exception& e) {
      throw ConfigError("field '" + f + ".pointer': " + e.what());
    }
    values.push_back(p["values"].get<std::vector<json>>());
  }

  std::vector<std::vector<json>> cases{{}};
  for (const auto& vs : values) {
    std::vector<std::vector<json>> next;
    for (const auto& c : cases)
      for (const json& v : vs) {
        next.push_back(c);
        next.back().push_back(v);
      }
    cases = std::move(next);
  }

  std::vector<RunConfig> configs;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    json src = config.source;
    for (std::size_t p = 0; p < pointers.size(); ++p) src[pointers[p]] = cases[k][p];
    try {
      configs.push_back(parse_config(src, config.base_dir));
    } catch (const ConfigError& e) {
      throw ConfigError("sweep case " + std::to_string(k) + ": " + e.what());
    }
  }

  std::filesystem::create_directories(out);
  std::vector<int> codes(configs.size(), kExitNumerical);
  std::vector<json> summaries(configs.size());
  std::vector<std::string> logs(configs.size());
  parallel_for(static_cast<int>(configs.size()), [&](int k) {
    char name[32];
    std::snprintf(name, sizeof name, "case_%03d", k);
    std::ostringstream case_log;
    try {
      codes[k] = run_solve(configs[k], out / name, case_log);
      summaries[k] = read_json_file(out / name / "report.json")["convergence"];
    } catch (const Error& e) {
      case_log << "error: " << e.what() << "\n";
      summaries[k] = {{"status", "diverged"}, {"iterations", 0}, {"min_u", nullptr}};
    }
    logs[k] = name + std::string(": ") + case_log.str();
  });

  std::ostringstream csv;
  csv << "case";
  for (const auto& p : pointers) csv << "," << p.to_string();
  csv << ",status,iterations,min_u\n";
  int exit_code = kExitOk;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    csv << k;
    for (const json& v : cases[k]) csv << "," << (v.is_number_float() ? format_number(v.get<double>()) : v.dump());
    const json& s = summaries[k];
    csv << "," << s["status"].get<std::string>() << "," << s["iterations"].dump() << ","
        << (s["min_u"].is_number() ? format_number(s["min_u"].get<double>()) : "") << "\n";
    if (codes[k] != kExitOk) exit_code = kExitNumerical;
    log << logs[k];
  }
  write_text(out / "summary.csv", csv.str());
  return exit_code;
}

}  // namespace ee
