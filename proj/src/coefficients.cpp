#include "ee/coefficients.hpp"

#include <cmath>

#include "ee/errors.hpp"

namespace ee {

Eigen::Vector2d CoefficientSet::drift(int, const Point&, const State&, const Gradients&) const {
  return Eigen::Vector2d::Zero();
}

double CoefficientSet::lower_order(int, const Point&, const State&) const { return 0.0; }

bool CoefficientSet::admissible(const State&) const { return true; }

void CoefficientSet::require_admissible(const State& w, int node) const {
  if (!admissible(w))
    throw StateError("state outside the admissible set" +
                         (node >= 0 ? " at node " + std::to_string(node) : std::string()) +
                         " (u = " + std::to_string(w[energy_index()]) + ")",
                     node, w[energy_index()]);
}

Gradients ElementStates::grads(int t) const {
  Gradients z(gradients.size(), 2);
  for (std::size_t i = 0; i < gradients.size(); ++i) z.row(i) = gradients[i].col(t).transpose();
  return z;
}

ElementStates element_states(const std::vector<Field>& fields) {
  if (fields.empty()) throw ContractError("element_states needs at least one field");
  const Mesh& mesh = fields.front().mesh();
  const int nt = mesh.triangle_count();
  ElementStates s;
  s.values.resize(fields.size(), nt);
  s.gradients.assign(fields.size(), Eigen::Matrix2Xd(2, nt));
  for (std::size_t i = 0; i < fields.size(); ++i) {
    for (int t = 0; t < nt; ++t) {
      s.values(i, t) = fields[i].centroid_value(t);
      s.gradients[i].col(t) = fields[i].gradient(t);
    }
  }
  return s;
}

void check_nodal_states(const CoefficientSet& coeffs, const std::vector<Field>& fields) {
  const int n = fields.front().size();
  State w(fields.size());
  for (int node = 0; node < n; ++node) {
    for (std::size_t i = 0; i < fields.size(); ++i) w[i] = fields[i][node];
    coeffs.require_admissible(w, node);
  }
}

ScalarProblem frozen_problem(const CoefficientSet& coeffs, int equation, const Mesh& mesh,
                             const ElementStates& states, const Eigen::VectorXd& dirichlet_values) {
  const int nt = mesh.triangle_count();
  ScalarProblem p{Eigen::VectorXd(nt), Eigen::Matrix2Xd(2, nt), Eigen::VectorXd(nt),
                  Eigen::VectorXd::Zero(nt), dirichlet_values};
  const bool energy = equation == coeffs.energy_index();
  for (int t = 0; t < nt; ++t) {
    const Point x = mesh.centroid(t);
    const State w = states.state(t);
    coeffs.require_admissible(w);
    const Gradients z = states.grads(t);
    p.diffusivity[t] = coeffs.leading(equation, x, w);
    p.drift.col(t) = coeffs.drift(equation, x, w, z);
    p.reaction[t] = coeffs.lower_order(equation, x, w);
    if (energy) p.source[t] = coeffs.dissipation(x, w, z);
  }
  return p;
}

Eigen::VectorXd dissipation_density(const CoefficientSet& coeffs, const std::vector<Field>& fields) {
  check_nodal_states(coeffs, fields);
  const Mesh& mesh = fields.front().mesh();
  const ElementStates s = element_states(fields);
  Eigen::VectorXd pi(mesh.triangle_count());
  for (int t = 0; t < mesh.triangle_count(); ++t)
    pi[t] = coeffs.dissipation(mesh.centroid(t), s.state(t), s.grads(t));
  return pi;
}

WeakResidual weak_form_action(const std::vector<Field>& fields, const CoefficientSet& coeffs,
                              int equation, const Eigen::VectorXd& test) {
  const Mesh& mesh = fields.front().mesh();
  const ElementStates s = element_states(fields);
  const ScalarProblem p = frozen_problem(coeffs, equation, mesh, s,
                                         Eigen::VectorXd::Zero(mesh.node_count()));
  const SparseSystem sys = assemble(mesh, p);
  const Eigen::VectorXd& v = fields[equation].values();
  const Eigen::VectorXd r = residual_vector(sys, v);
  const Eigen::VectorXd scale = residual_scale(sys, v);
  return {test.dot(r), test.cwiseAbs().dot(scale)};
}

WeakResidual weak_residual(const std::vector<Field>& fields, const CoefficientSet& coeffs,
                           int equation, const Field& test) {
  const auto& mask = test.mesh().dirichlet_mask();
  for (int i = 0; i < test.size(); ++i)
    if (mask[i] && test[i] != 0.0)
      throw ContractError("test function does not vanish at Dirichlet node " + std::to_string(i));
  return weak_form_action(fields, coeffs, equation, test.values());
}

std::vector<double> equation_residuals(const std::vector<Field>& fields,
                                       const CoefficientSet& coeffs,
                                       const std::vector<Eigen::VectorXd>& dirichlet_values) {
  const Mesh& mesh = fields.front().mesh();
  const ElementStates s = element_states(fields);
  std::vector<double> out;
  for (int eq = 0; eq < coeffs.component_count(); ++eq) {
    const ScalarProblem p = frozen_problem(coeffs, eq, mesh, s, dirichlet_values[eq]);
    out.push_back(relative_residual(assemble(mesh, p), fields[eq].values()));
  }
  return out;
}

}  // namespace ee
