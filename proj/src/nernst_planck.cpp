#include <cmath>
#include <limits>
#include <map>

#include "ee/errors.hpp"
#include "ee/models.hpp"

namespace ee {

NernstPlanckModel::NernstPlanckModel(NernstPlanckParams params) : params_(std::move(params)) {
  if (params_.species.empty()) throw ModelError("Nernst-Planck model needs at least one species");
  if (!(params_.u_min > 0.0)) throw ModelError("temperature floor u_min must be positive");
}

std::string NernstPlanckModel::component_name(int i) const {
  const int n = transport_count();
  if (i < n - 1) return "rho" + std::to_string(i + 1);
  return i == n - 1 ? "phi" : "u";
}

bool NernstPlanckModel::admissible(const State& w) const {
  return w[energy_index()] > params_.u_min;
}

double NernstPlanckModel::checked_temperature(const State& w) const {
  require_admissible(w);
  return w[energy_index()];
}

double NernstPlanckModel::mobility(int species, const State& w) const {
  const double u = checked_temperature(w);
  return params_.species[species].diffusivity(u) * std::exp(w[species]);
}

double NernstPlanckModel::leading(int eq, const Point&, const State& w) const {
  const double u = checked_temperature(w);
  const int n = transport_count();
  if (eq < n - 1) return mobility(eq, w);
  if (eq == n - 1) return params_.permittivity(u);
  return params_.kappa(u);
}

Eigen::Vector2d NernstPlanckModel::drift(int eq, const Point&, const State& w,
                                         const Gradients& z) const {
  if (eq >= potential_index()) return Eigen::Vector2d::Zero();
  const double u = checked_temperature(w);
  const double charge = params_.species[eq].charge;
  return mobility(eq, w) * (charge / u) * z.row(potential_index()).transpose();
}

double NernstPlanckModel::dissipation(const Point&, const State& w, const Gradients& z) const {
  const double u = checked_temperature(w);
  const Eigen::Vector2d grad_phi = z.row(potential_index()).transpose();
  double pi = 0.0;
  for (int i = 0; i < potential_index(); ++i) {
    const double charge = params_.species[i].charge;
    const Eigen::Vector2d force = z.row(i).transpose() + (charge / u) * grad_phi;
    pi += charge * mobility(i, w) * force.dot(grad_phi);
  }
  return pi;
}

BoundaryData NernstPlanckModel::boundary_values(const Mesh& mesh) const {
  BoundaryData out(component_count(), Eigen::VectorXd(mesh.node_count()));
  for (int node = 0; node < mesh.node_count(); ++node) {
    const Point& x = mesh.node(node);
    for (int i = 0; i < potential_index(); ++i)
      out[i][node] = params_.species[i].boundary(x);
    out[potential_index()][node] = params_.phi_boundary(x);
    out[energy_index()][node] = params_.temperature_boundary(x);
  }
  return out;
}

NernstPlanckModel np_coefficients(const NernstPlanckParams& params) {
  return NernstPlanckModel(params);
}

EntropyBalance entropy_residual(const NernstPlanckModel& model, const std::vector<Field>& fields) {
  check_nodal_states(model, fields);
  const Mesh& mesh = fields.front().mesh();
  const int species = model.potential_index();
  const int phi = model.potential_index();
  const int energy = model.energy_index();
  const ElementStates s = element_states(fields);

  // Element-constant fluxes j_i = -m_i (grad rho_i + (v_i/T) grad phi) and
  // q = -kappa grad T from centroid states.
  std::vector<std::vector<Eigen::Vector2d>> j(mesh.triangle_count());
  std::vector<Eigen::Vector2d> q(mesh.triangle_count());
  EntropyBalance out;
  out.min_local_production = std::numeric_limits<double>::infinity();
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const State w = s.state(t);
    const double temp = w[energy];
    const Eigen::Vector2d grad_phi = s.gradients[phi].col(t);
    const Eigen::Vector2d grad_t = s.gradients[energy].col(t);
    double local = 0.0;
    for (int i = 0; i < species; ++i) {
      const double m = model.mobility(i, w);
      const double charge = model.params().species[i].charge;
      const Eigen::Vector2d flux = -m * (s.gradients[i].col(t) + (charge / temp) * grad_phi);
      j[t].push_back(flux);
      local += flux.squaredNorm() / m;
    }
    const double kappa = model.params().kappa(temp);
    q[t] = -kappa * grad_t;
    local += kappa * grad_t.squaredNorm() / (temp * temp);
    out.min_local_production = std::min(out.min_local_production, local);
    out.production += mesh.area(t) * local;
  }

  std::map<std::pair<int, int>, int> owner;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangle(t);
    for (int k = 0; k < 3; ++k) owner[{tri[k], tri[(k + 1) % 3]}] = t;
  }
  for (const auto& e : mesh.boundary_edges()) {
    const int t = owner.at({e.a, e.b});
    const Eigen::Vector2d d = mesh.node(e.b) - mesh.node(e.a);
    const Eigen::Vector2d normal_ds(d(1), -d(0));  // outward normal times edge length
    const double temp = 0.5 * (fields[energy][e.a] + fields[energy][e.b]);
    Eigen::Vector2d flux = q[t] / temp;
    for (int i = 0; i < species; ++i) {
      const double rho = 0.5 * (fields[i][e.a] + fields[i][e.b]);
      flux -= rho * j[t][i];
    }
    out.boundary_flux += flux.dot(normal_ds);
  }
  const double diff = std::abs(out.boundary_flux - out.production);
  out.residual = out.production > 1e-14 ? diff / out.production : diff;
  return out;
}

}  // namespace ee
