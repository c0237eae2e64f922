#include "ee/estimates.hpp"

#include <algorithm>
#include <cmath>

#include "ee/errors.hpp"

namespace ee {

namespace {

// Element quantity integrated over each ball of the family.
std::vector<double> ball_integrals(const Mesh& mesh, const Point& center,
                                   const std::vector<double>& radii,
                                   const Eigen::VectorXd& density) {
  std::vector<double> q;
  for (const BallCover& cover : ball_restriction(mesh, {center, radii})) {
    double sum = 0.0;
    for (const auto& e : cover.elements) sum += e.weight * density[e.triangle];
    q.push_back(sum);
  }
  return q;
}

Eigen::VectorXd gradient_energy_density(const Field& f) {
  const Mesh& mesh = f.mesh();
  Eigen::VectorXd d(mesh.triangle_count());
  for (int t = 0; t < mesh.triangle_count(); ++t) d[t] = f.gradient(t).squaredNorm();
  return d;
}

}  // namespace

std::vector<Point> default_centers(const Mesh& mesh) {
  Point lo = mesh.node(0), hi = mesh.node(0);
  for (const Point& p : mesh.nodes()) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  std::vector<Point> out;
  const Point mid = 0.5 * (lo + hi);
  const Point quarter = 0.25 * (hi - lo);
  for (const Point& p : {mid, Point(mid + Point(-quarter.x(), -quarter.y())),
                         Point(mid + Point(quarter.x(), -quarter.y())),
                         Point(mid + Point(-quarter.x(), quarter.y())), Point(mid + quarter)})
    if (mesh.contains(p)) out.push_back(p);
  for (int c : mesh.corner_nodes()) out.push_back(mesh.node(c));
  return out;
}

double morrey_seminorm(const Field& f, double p, double alpha, const std::vector<Point>& centers,
                       const std::vector<double>& radii) {
  if (centers.empty() || radii.empty())
    throw ContractError("Morrey seminorm needs at least one center and one radius");
  if (!(p >= 1.0)) throw ContractError("Morrey exponent p must be >= 1");
  if (!(alpha > 0.0 && alpha <= 2.0)) throw ContractError("Morrey exponent alpha must lie in (0, 2]");
  const Mesh& mesh = f.mesh();
  Eigen::VectorXd density(mesh.triangle_count());
  for (int t = 0; t < mesh.triangle_count(); ++t)
    density[t] = std::pow(std::abs(f.centroid_value(t)), p);
  double sup = 0.0;
  for (const Point& c : centers) {
    const std::vector<double> q = ball_integrals(mesh, c, radii, density);
    for (std::size_t k = 0; k < radii.size(); ++k)
      sup = std::max(sup, std::pow(radii[k], -alpha) * q[k]);
  }
  return sup;
}

DecayReport gradient_energy_decay(const Field& f, const Point& center,
                                  const std::vector<double>& radii) {
  return make_decay_report(center, radii,
                           ball_integrals(f.mesh(), center, radii, gradient_energy_density(f)));
}

std::vector<DecayReport> dissipation_decay(const CoefficientSet& coeffs,
                                           const std::vector<Field>& fields,
                                           const std::vector<Point>& centers,
                                           const std::vector<double>& radii) {
  const Mesh& mesh = fields.front().mesh();
  const Eigen::VectorXd density = dissipation_density(coeffs, fields).cwiseAbs();
  std::vector<DecayReport> out;
  for (const Point& c : centers) {
    std::vector<double> q = ball_integrals(mesh, c, radii, density);
    if (*std::max_element(q.begin(), q.end()) <= 1e-10) {
      DecayReport rep;
      rep.center = c;
      rep.radii = radii;
      rep.q = std::move(q);
      rep.notice = "zero dissipation measure: vacuously diffusive";
      out.push_back(std::move(rep));
      continue;
    }
    out.push_back(make_decay_report(c, radii, std::move(q)));
  }
  return out;
}

std::vector<DecayReport> oscillation_hoelder(const Field& f, const std::vector<Point>& centers,
                                             const std::vector<double>& radii) {
  const Mesh& mesh = f.mesh();
  std::vector<DecayReport> out;
  for (const Point& c : centers) {
    if (!mesh.contains(c)) throw DomainError("oscillation center lies outside the closed domain");
    std::vector<double> q;
    for (double r : radii) {
      const std::vector<int> nodes = nodes_in_ball(mesh, c, r);
      if (nodes.empty()) {
        q.push_back(0.0);
        continue;
      }
      double lo = f[nodes.front()], hi = lo;
      for (int i : nodes) {
        lo = std::min(lo, f[i]);
        hi = std::max(hi, f[i]);
      }
      q.push_back(hi - lo);
    }
    if (*std::max_element(q.begin(), q.end()) < 1e-13) {
      DecayReport rep;
      rep.center = c;
      rep.radii = radii;
      rep.q = std::move(q);
      rep.beta = rep.raw_beta = 1.0;
      std::tie(rep.window_begin, rep.window_end) = default_fit_window(static_cast<int>(radii.size()));
      rep.notice = "constant field";
      out.push_back(std::move(rep));
      continue;
    }
    DecayReport rep = make_decay_report(c, radii, std::move(q), true);
    rep.beta = std::clamp(rep.raw_beta, 0.0, 1.0);
    out.push_back(std::move(rep));
  }
  return out;
}

BoundsReport linf_bounds(const CoefficientSet& coeffs, const std::vector<Field>& fields,
                         const BoundaryData& boundary) {
  const Mesh& mesh = fields.front().mesh();
  const std::vector<int>& s = mesh.dirichlet_nodes();
  BoundsReport rep;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    ComponentBounds b;
    b.name = coeffs.component_name(static_cast<int>(i));
    b.min = fields[i].values().minCoeff();
    b.max = fields[i].values().maxCoeff();
    if (s.empty()) {
      b.boundary_min = b.min;
      b.boundary_max = b.max;
    } else {
      b.boundary_min = b.boundary_max = boundary[i][s.front()];
      for (int node : s) {
        b.boundary_min = std::min(b.boundary_min, boundary[i][node]);
        b.boundary_max = std::max(b.boundary_max, boundary[i][node]);
      }
    }
    b.margin = std::max(0.0, b.max - b.boundary_max) + std::max(0.0, b.boundary_min - b.min);
    rep.components.push_back(b);
  }
  return rep;
}

std::vector<std::vector<double>> lp_gradient_norms(const std::vector<Field>& fields,
                                                   const std::vector<double>& t_list) {
  for (double t : t_list)
    if (!(t >= 1.0)) throw ContractError("gradient integrability exponent t must be >= 1");
  std::vector<std::vector<double>> out;
  for (const Field& f : fields) {
    const Mesh& mesh = f.mesh();
    std::vector<double> row;
    for (double t : t_list) {
      double sum = 0.0;
      for (int k = 0; k < mesh.triangle_count(); ++k)
        sum += mesh.area(k) * std::pow(f.gradient(k).norm(), t);
      row.push_back(std::pow(sum, 1.0 / t));
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::UniqueAtTol: return "UNIQUE_AT_TOL";
    case Verdict::Distinct: return "DISTINCT";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "unknown";
}

UniquenessProbe uniqueness_probe(const Model& model, const Mesh& mesh,
                                 const SolverOptions& options, std::vector<Field> guess1,
                                 std::vector<Field> guess2) {
  const BoundaryData boundary = model.boundary_values(mesh);
  UniquenessProbe probe;
  probe.threshold = 100.0 * options.tol;
  probe.data_magnitude = model.data_magnitude(mesh);
  const SystemSolution a = solve_system(model, mesh, boundary, options, std::move(guess1));
  const SystemSolution b = solve_system(model, mesh, boundary, options, std::move(guess2));
  probe.first = a.report;
  probe.second = b.report;
  if (a.report.status != Status::Converged || b.report.status != Status::Converged)
    return probe;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.fields.size(); ++i) {
    const Eigen::VectorXd& w1 = a.fields[i].values();
    const double d = (w1 - b.fields[i].values()).lpNorm<Eigen::Infinity>() /
                     std::max(w1.lpNorm<Eigen::Infinity>(), 1e-12);
    probe.distance.push_back(d);
    worst = std::max(worst, d);
  }
  probe.verdict = worst <= probe.threshold ? Verdict::UniqueAtTol : Verdict::Distinct;
  return probe;
}

WeakResidual galerkin_identity(const CoefficientSet& coeffs, const std::vector<Field>& fields,
                               const Field& extension, int equation) {
  return weak_form_action(fields, coeffs, equation, fields[equation].values() - extension.values());
}

std::vector<TruncationCheck> truncation_checks(const CoefficientSet& coeffs,
                                               const std::vector<Field>& fields,
                                               const Field& extension, int levels) {
  const int e = coeffs.energy_index();
  const double top = (fields[e].values() - extension.values()).lpNorm<Eigen::Infinity>();
  std::vector<TruncationCheck> out;
  if (top == 0.0) return out;
  for (int k = 0; k < levels; ++k) {
    const double level = top * std::pow(10.0, -k);
    const Field g = truncation_test(fields[e], extension, level);
    out.push_back({level, weak_form_action(fields, coeffs, e, g.values())});
  }
  return out;
}

}  // namespace ee
