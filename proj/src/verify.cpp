#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

#include "ee/certificate.hpp"
#include "ee/errors.hpp"
#include "ee/output.hpp"
#include "ee/presets.hpp"
#include "ee/run.hpp"

namespace ee {

using nlohmann::json;

namespace {

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

Check guarded(const std::string& name, const std::function<Check()>& fn) {
  try {
    Check c = fn();
    c.name = name;
    return c;
  } catch (const std::exception& e) {
    return {name, false, std::string("exception: ") + e.what()};
  }
}

Mesh all_dirichlet(const Mesh& mesh) {
  return tag_boundary(mesh, [](const Point&) { return BoundaryTag::Dirichlet; });
}

double max_range_excess(const Field& f, const Eigen::VectorXd& g) {
  const Mesh& mesh = f.mesh();
  double lo = g[mesh.dirichlet_nodes().front()], hi = lo;
  for (int n : mesh.dirichlet_nodes()) {
    lo = std::min(lo, g[n]);
    hi = std::max(hi, g[n]);
  }
  return std::max(0.0, f.values().maxCoeff() - hi) + std::max(0.0, lo - f.values().minCoeff());
}

double order(double e_coarse, double e_fine) { return std::log2(e_coarse / e_fine); }

// Manufactured sine problem on n x n squares with zero Dirichlet data.
std::pair<double, double> sine_errors(int n) {
  const Mesh mesh = all_dirichlet(build_rectangle(n, n, 1.0, 1.0));
  const double pi = std::numbers::pi;
  ScalarProblem p = ScalarProblem::laplace(mesh);
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const Point c = mesh.centroid(t);
    p.source[t] = 2 * pi * pi * std::sin(pi * c.x()) * std::sin(pi * c.y());
  }
  const Field u = solve_linear(mesh, assemble(mesh, p)).field;
  const auto exact = [pi](const Point& x) { return std::sin(pi * x.x()) * std::sin(pi * x.y()); };
  return {l2_error(u, exact), h1_error(u, exact)};
}

std::vector<Check> fem_suite() {
  std::vector<Check> out;
  out.push_back(guarded("stiffness symmetric with zero row sums", [] {
    double worst = 0.0;
    for (const Mesh& mesh : {all_dirichlet(build_rectangle(8, 8, 1, 1)), all_dirichlet(build_lshape(4))}) {
      ScalarProblem p = ScalarProblem::laplace(mesh);
      const SparseSystem s = assemble(mesh, p);
      const SparseMatrix k = s.stiffness;
      const Eigen::MatrixXd dense(k);
      worst = std::max(worst, (dense - dense.transpose()).cwiseAbs().maxCoeff());
      worst = std::max(worst, dense.rowwise().sum().cwiseAbs().maxCoeff());
    }
    return Check{"", worst <= 1e-13, "max defect " + fmt(worst)};
  }));
  out.push_back(guarded("discrete maximum principle", [] {
    double worst = 0.0;
    for (const Mesh& mesh : {all_dirichlet(build_rectangle(16, 16, 1, 1)), all_dirichlet(build_lshape(8))}) {
      ScalarProblem p = ScalarProblem::laplace(mesh);
      p.dirichlet_values = interpolate(mesh, [](const Point& x) {
                             return std::sin(5 * x.x()) + std::cos(3 * x.y() * x.x());
                           }).values();
      worst = std::max(worst, max_range_excess(solve_linear(mesh, assemble(mesh, p)).field,
                                               p.dirichlet_values));
    }
    return Check{"", worst <= 1e-12, "range excess " + fmt(worst)};
  }));
  out.push_back(guarded("flux balance", [] {
    const Mesh mesh = electrode_square(16);
    ScalarProblem p = ScalarProblem::laplace(mesh);
    p.source.setConstant(3.0);
    const SparseSystem s = assemble(mesh, p);
    const Field u = solve_linear(mesh, s).field;
    const Eigen::VectorXd r = residual_vector(s, u.values());
    double boundary = 0.0;
    for (int n : mesh.dirichlet_nodes()) boundary += r[n];
    const double defect = std::abs(boundary + 3.0 * mesh.total_area());
    return Check{"", defect <= 1e-10, "defect " + fmt(defect)};
  }));
  out.push_back(guarded("manufactured Poisson orders", [] {
    const auto e16 = sine_errors(16), e32 = sine_errors(32), e64 = sine_errors(64);
    const double l2a = order(e16.first, e32.first), l2b = order(e32.first, e64.first);
    const double h1a = order(e16.second, e32.second), h1b = order(e32.second, e64.second);
    const bool ok = l2a >= 1.8 && l2a <= 2.2 && l2b >= 1.8 && l2b <= 2.2 && h1a >= 0.8 &&
                    h1a <= 1.2 && h1b >= 0.8 && h1b <= 1.2;
    return Check{"", ok, "L2 " + fmt(l2a) + ", " + fmt(l2b) + "; H1 " + fmt(h1a) + ", " + fmt(h1b)};
  }));
  out.push_back(guarded("mesh file round trip", [] {
    const Mesh mesh = electrode_square(5);
    std::stringstream io;
    write_mesh(io, mesh);
    const Mesh back = read_mesh(io);
    bool same = back.node_count() == mesh.node_count() && back.triangle_count() == mesh.triangle_count() &&
                back.dirichlet_nodes() == mesh.dirichlet_nodes();
    for (int i = 0; same && i < mesh.node_count(); ++i) same = back.node(i) == mesh.node(i);
    return Check{"", same, same ? "identical" : "differs"};
  }));
  return out;
}

Check identity_check(const Model& model, const std::vector<Field>& fields, const Mesh& mesh,
                     double res_tol) {
  const BoundaryData boundary = model.boundary_values(mesh);
  const std::vector<Field> ext = harmonic_initial_guess(mesh, boundary);
  double worst = 0.0;
  for (int i = 0; i < model.component_count(); ++i)
    worst = std::max(worst, galerkin_identity(model, fields, ext[i], i).relative());
  bool trunc = true;
  for (const auto& c : truncation_checks(model, fields, ext[model.energy_index()]))
    trunc = trunc && c.residual.value <= res_tol * c.residual.scale;
  return {"", worst <= res_tol && trunc,
          "Galerkin " + fmt(worst) + ", truncation " + (trunc ? "holds" : "violated")};
}

double gradient_sum(const std::vector<Field>& fields) {
  double s = 0.0;
  for (const Field& f : fields) s += h1_seminorm(f);
  return s;
}

std::vector<Check> thermistor_suite() {
  std::vector<Check> out;
  const SolverOptions options;
  out.push_back(guarded("closed form", [&] {
    const Mesh mesh = electrode_square(64);
    ThermistorParams p;
    p.phi_boundary = [](const Point& x) { return x.x(); };
    const ThermistorModel model(p);
    const SystemSolution s = solve_system(model, mesh, model.boundary_values(mesh), options);
    double ephi = 0.0, eu = 0.0;
    for (int i = 0; i < mesh.node_count(); ++i) {
      const double x = mesh.node(i).x();
      ephi = std::max(ephi, std::abs(s.fields[0][i] - x));
      eu = std::max(eu, std::abs(s.fields[1][i] - 0.5 * x * (1 - x)));
    }
    const double umax = s.fields[1].values().maxCoeff();
    return Check{"", s.report.status == Status::Converged && ephi <= 1e-10 && eu <= 2e-3 &&
                         std::abs(umax - 0.125) <= 2e-3,
                 to_string(s.report.status) + ", |phi - x| " + fmt(ephi) + ", |u - x(1-x)/2| " +
                     fmt(eu) + ", max u " + fmt(umax)};
  }));
  const Mesh mesh = electrode_square(16);
  const ThermistorModel model(small_data_thermistor());
  const SystemSolution s = solve_system(model, mesh, model.boundary_values(mesh), options);
  out.push_back(guarded("small data converges within 25 iterations", [&] {
    return Check{"", s.report.status == Status::Converged && s.report.iterations <= 25,
                 to_string(s.report.status) + " in " + std::to_string(s.report.iterations)};
  }));
  out.push_back(guarded("potential obeys the maximum principle", [&] {
    const double m = linf_bounds(model, s.fields, model.boundary_values(mesh)).components[0].margin;
    return Check{"", m <= 10 * options.res_tol, "margin " + fmt(m)};
  }));
  out.push_back(guarded("energy identities", [&] {
    return identity_check(model, s.fields, mesh, options.res_tol);
  }));
  out.push_back(guarded("small-data scaling", [&] {
    std::vector<double> sums;
    for (double scale : {1.0, 0.5, 0.25, 0.125}) {
      const ThermistorModel m(small_data_thermistor(scale));
      sums.push_back(gradient_sum(solve_system(m, mesh, m.boundary_values(mesh), options).fields));
    }
    bool ok = true;
    for (std::size_t k = 1; k < sums.size(); ++k) ok = ok && sums[k] < sums[k - 1];
    return Check{"", ok, "sums " + fmt(sums[0]) + " > " + fmt(sums[1]) + " > " + fmt(sums[2]) +
                             " > " + fmt(sums[3])};
  }));
  out.push_back(guarded("growth certificate", [&] {
    const auto box = std::vector<std::pair<double, double>>{{-1.0, 1.0}, {-2.0, 2.0}};
    const GrowthCertificate c = certify_growth(model, box);
    // sigma(k^-1(u)) is monotone in u, so its range is attained at the corners.
    const auto [lo, hi] = std::minmax({model.sigma_hat(-2.0), model.sigma_hat(2.0)});
    const bool ok = c.nu[0] > 0 && std::abs(c.nu[0] - lo) <= 1e-6 && std::abs(c.mu[0] - hi) <= 1e-6 &&
                    std::isfinite(c.growth_ratio);
    return Check{"", ok, "nu " + fmt(c.nu[0]) + ", mu " + fmt(c.mu[0]) + ", L " + fmt(c.growth_ratio)};
  }));
  return out;
}

std::vector<Check> np_suite() {
  std::vector<Check> out;
  const SolverOptions options;
  out.push_back(guarded("Boltzmann equilibrium", [&] {
    const Mesh mesh = electrode_square(32);
    const double t0 = 1.5;
    NernstPlanckParams p;
    const auto phi = [](const Point& x) { return 0.5 * x.x() + 0.2 * x.x() * x.y(); };
    for (auto [charge, bulk] : {std::pair{1.0, 0.2}, std::pair{-1.0, -0.1}}) {
      Species s;
      s.charge = charge;
      s.diffusivity = ScalarFunction::affine(1.0, 0.5);
      s.boundary = [=](const Point& x) { return bulk - charge * phi(x) / t0; };
      p.species.push_back(s);
    }
    p.phi_boundary = phi;
    p.temperature_boundary = [t0](const Point&) { return t0; };
    p.permittivity = ScalarFunction::constant(2.0);
    const NernstPlanckModel model(p);
    const SystemSolution s = solve_system(model, mesh, model.boundary_values(mesh), options);
    double err = 0.0, mass = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double charge = p.species[i].charge, bulk = i == 0 ? 0.2 : -0.1;
      for (int n = 0; n < mesh.node_count(); ++n)
        err = std::max(err, std::abs(s.fields[i][n] - (bulk - charge * s.fields[2][n] / t0)));
    }
    const Eigen::VectorXd d = dissipation_density(model, s.fields);
    for (int t = 0; t < mesh.triangle_count(); ++t) mass += mesh.area(t) * std::abs(d[t]);
    const double ent = entropy_residual(model, s.fields).residual;
    return Check{"", s.report.status == Status::Converged && err <= 1e-8 && mass <= 1e-10 && ent <= 1e-10,
                 "rho error " + fmt(err) + ", |Pi| mass " + fmt(mass) + ", entropy " + fmt(ent)};
  }));
  out.push_back(guarded("entropy balance under refinement", [&] {
    std::vector<double> res;
    for (int n : {16, 32, 64}) {
      const Mesh mesh = electrode_square(n);
      const NernstPlanckModel model(small_data_nernst_planck());
      const SystemSolution s = solve_system(model, mesh, model.boundary_values(mesh), options);
      res.push_back(entropy_residual(model, s.fields).residual);
    }
    return Check{"", res[1] <= 0.05 && res[1] < res[0] && res[2] < res[1],
                 "residuals " + fmt(res[0]) + ", " + fmt(res[1]) + ", " + fmt(res[2])};
  }));
  const Mesh mesh = electrode_square(16);
  const NernstPlanckModel model(small_data_nernst_planck());
  const SystemSolution s = solve_system(model, mesh, model.boundary_values(mesh), options);
  out.push_back(guarded("energy identities", [&] {
    return identity_check(model, s.fields, mesh, options.res_tol);
  }));
  out.push_back(guarded("potential obeys the maximum principle", [&] {
    const double m = linf_bounds(model, s.fields, model.boundary_values(mesh))
                         .components[model.potential_index()]
                         .margin;
    return Check{"", m <= 10 * options.res_tol, "margin " + fmt(m)};
  }));
  out.push_back(guarded("growth certificate", [&] {
    const auto box = std::vector<std::pair<double, double>>{{-1, 1}, {-1, 1}, {-1, 1}, {0.5, 2}};
    const GrowthCertificate c = certify_growth(model, box);
    // m_i = exp(rho_i) on [-1, 1]; eps = kappa = 1.
    const bool ok = std::abs(c.nu[0] - std::exp(-1.0)) <= 1e-6 && std::abs(c.mu[0] - std::exp(1.0)) <= 1e-6 &&
                    std::abs(c.nu[2] - 1.0) <= 1e-6 && std::isfinite(c.growth_ratio);
    return Check{"", ok, "nu " + fmt(c.nu[0]) + ", mu " + fmt(c.mu[0]) + ", L " + fmt(c.growth_ratio)};
  }));
  return out;
}

Field lshape_corner_field(const Mesh& mesh) {
  const auto g = [](const Point& p) {
    const Point d = p - Point(1, 1);
    double theta = std::atan2(d.y(), d.x()) - std::numbers::pi / 2;
    if (theta < 0) theta += 2 * std::numbers::pi;
    return std::pow(d.norm(), 2.0 / 3.0) * std::sin(2.0 * theta / 3.0);
  };
  ScalarProblem p = ScalarProblem::laplace(mesh);
  p.dirichlet_values = interpolate(mesh, g).values();
  return solve_linear(mesh, assemble(mesh, p)).field;
}

std::vector<Check> estimates_suite() {
  std::vector<Check> out;
  const Mesh square = all_dirichlet(build_rectangle(32, 32, 1, 1));
  const std::vector<double> radii = dyadic_radii(square);
  out.push_back(guarded("unit gradient energy decay", [&] {
    const Field f = interpolate(square, [](const Point& x) { return x.x(); });
    const double b = gradient_energy_decay(f, Point(0.5, 0.5), radii).beta;
    return Check{"", std::abs(b - 2.0) <= 0.05, "beta " + fmt(b)};
  }));
  out.push_back(guarded("reentrant corner decay", [&] {
    const Mesh mesh = all_dirichlet(build_lshape(64));
    const double b = gradient_energy_decay(lshape_corner_field(mesh), Point(1, 1), dyadic_radii(mesh)).beta;
    return Check{"", std::abs(b - 4.0 / 3.0) <= 0.1, "beta " + fmt(b)};
  }));
  out.push_back(guarded("Morrey seminorm of the constant", [&] {
    const Field one = interpolate(square, [](const Point&) { return 1.0; });
    const double m = morrey_seminorm(one, 2.0, 2.0, {Point(0.5, 0.5)}, radii);
    return Check{"", std::abs(m - std::numbers::pi) <= 1e-2, "value " + fmt(m)};
  }));
  out.push_back(guarded("Hoelder exponents", [&] {
    const Field root = interpolate(square, [](const Point& x) { return std::sqrt((x - Point(0.5, 0.5)).norm()); });
    const Field affine = interpolate(square, [](const Point& x) { return 2 * x.x() - x.y(); });
    const double a = oscillation_hoelder(root, {Point(0.5, 0.5)}, radii).front().beta;
    const double b = oscillation_hoelder(affine, {Point(0.5, 0.5)}, radii).front().beta;
    return Check{"", std::abs(a - 0.5) <= 0.05 && std::abs(b - 1.0) <= 0.05,
                 "sqrt " + fmt(a) + ", affine " + fmt(b)};
  }));
  out.push_back(guarded("uniform dissipation decay", [&] {
    const Mesh mesh = electrode_square(32);
    ThermistorParams p;
    p.phi_boundary = [](const Point& x) { return x.x(); };
    const ThermistorModel model(p);
    const SystemSolution s = solve_system(model, mesh, model.boundary_values(mesh));
    double worst = 0.0;
    for (const DecayReport& r : dissipation_decay(model, s.fields, {Point(0.5, 0.5), Point(0.25, 0.75)}, radii))
      worst = std::max(worst, std::abs(r.beta - 2.0));
    return Check{"", worst <= 0.05, "max |beta - 2| " + fmt(worst)};
  }));
  out.push_back(guarded("capacitary cross-check on the L-shape", [&] {
    std::vector<double> pis, grads;
    for (int n : {32, 64, 128}) {
      const Mesh mesh = tag_boundary(build_lshape(n), [](const Point& x) {
        return x.x() < 1e-12 || x.x() > 2 - 1e-12 ? BoundaryTag::Dirichlet : BoundaryTag::Neumann;
      });
      ThermistorParams p = small_data_thermistor();
      p.phi_boundary = [](const Point& x) { return 0.5 * x.x(); };
      p.heat_source = [](const Point&) { return 0.0; };
      const ThermistorModel model(p);
      const SystemSolution s = solve_system(model, mesh, model.boundary_values(mesh));
      const auto r = dyadic_radii(mesh);
      pis.push_back(dissipation_decay(model, s.fields, {Point(1, 1)}, r).front().beta);
      grads.push_back(gradient_energy_decay(s.fields[0], Point(1, 1), r).beta);
    }
    bool ok = true;
    for (std::size_t k = 0; k < pis.size(); ++k) ok = ok && pis[k] > 0 && pis[k] <= 2 && pis[k] >= grads[k] - 0.15;
    ok = ok && std::abs(pis[1] - pis[0]) <= 0.1 && std::abs(pis[2] - pis[1]) <= 0.1;
    return Check{"", ok, "beta_Pi " + fmt(pis[0]) + ", " + fmt(pis[1]) + ", " + fmt(pis[2]) +
                             "; beta_grad " + fmt(grads[2])};
  }));
  out.push_back(guarded("gradient norms of a unit gradient", [&] {
    const Field f = interpolate(square, [](const Point& x) { return x.x(); });
    double worst = 0.0;
    const auto norms = lp_gradient_norms({f}, {1.0, 2.0, 4.0, 8.0});
    for (double v : norms.front()) worst = std::max(worst, std::abs(v - 1.0));
    return Check{"", worst <= 1e-12, "max deviation " + fmt(worst)};
  }));
  return out;
}

template <typename MakeModel>
Check uniqueness_check(const MakeModel& make, int n, double amplitude) {
  const Mesh mesh = electrode_square(n);
  const auto model = make();
  const SolverOptions options;
  const BoundaryData boundary = model.boundary_values(mesh);
  int unique = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const UniquenessProbe p = uniqueness_probe(
        model, mesh, options, random_initial_guess(model, mesh, boundary, amplitude, 2 * seed),
        random_initial_guess(model, mesh, boundary, amplitude, 2 * seed + 1));
    if (p.verdict == Verdict::UniqueAtTol) ++unique;
    for (double d : p.distance) worst = std::max(worst, d);
  }
  return {"", unique == 5, std::to_string(unique) + "/5 unique, max distance " + fmt(worst)};
}

std::vector<Check> uniqueness_suite() {
  std::vector<Check> out;
  out.push_back(guarded("small-data thermistor", [] {
    return uniqueness_check([] { return ThermistorModel(small_data_thermistor()); }, 16, 0.5);
  }));
  out.push_back(guarded("small-data Nernst-Planck", [] {
    return uniqueness_check([] { return NernstPlanckModel(small_data_nernst_planck()); }, 16, 0.5);
  }));
  out.push_back(guarded("zero data", [] {
    return uniqueness_check([] { return ThermistorModel(ThermistorParams{}); }, 8, 1.0);
  }));
  return out;
}

std::vector<Check> threshold_suite() {
  const ThresholdMap map = temperature_floor_probe(
      electrode_square(16), [](double v, double t) { return cooling_cell(v, t); },
      {0.0, 0.5, 1.0, 2.0, 4.0, 8.0}, {0.25, 0.5, 1.0, 2.0, 4.0, 8.0});
  std::string frontier;
  for (double f : map.frontier) frontier += (frontier.empty() ? "" : ", ") + fmt(f);
  return {{"frontier exists", map.frontier_exists, "frontier " + frontier},
          {"frontier monotone in temperature", map.frontier_monotone,
           map.violations.empty() ? "no violations" : map.violations.front()},
          {"zero-voltage column", map.zero_voltage_error <= 1e-10, "max error " + fmt(map.zero_voltage_error)},
          {"min u monotone in temperature", map.min_u_monotone,
           std::to_string(map.violations.size()) + " violations"}};
}

}  // namespace

int run_verify(const std::string& suite, const std::filesystem::path& out, std::ostream& log) {
  std::vector<Check> checks;
  if (suite == "fem") checks = fem_suite();
  else if (suite == "thermistor") checks = thermistor_suite();
  else if (suite == "nernst_planck") checks = np_suite();
  else if (suite == "estimates") checks = estimates_suite();
  else if (suite == "uniqueness") checks = uniqueness_suite();
  else if (suite == "threshold") checks = threshold_suite();
  else throw ConfigError("unknown suite '" + suite + "'");

  bool all = true;
  json results = json::array();
  for (const Check& c : checks) {
    all = all && c.passed;
    log << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    results.push_back({{"check", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  if (!out.empty()) {
    std::filesystem::create_directories(out);
    write_json(out / "results.json", {{"schema_version", kSchemaVersion},
                                      {"suite", suite},
                                      {"passed", all},
                                      {"checks", results}});
  }
  return all ? kExitOk : kExitNumerical;
}

}  // namespace ee
