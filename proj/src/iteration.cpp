#include "ee/iteration.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ee/errors.hpp"

namespace ee {

std::string to_string(Status status) {
  switch (status) {
    case Status::Converged: return "converged";
    case Status::Stalled: return "stalled";
    case Status::Diverged: return "diverged";
  }
  return "unknown";
}

namespace {

double relative_change(const Eigen::VectorXd& next, const Eigen::VectorXd& prev) {
  const double scale = std::max({next.lpNorm<Eigen::Infinity>(), prev.lpNorm<Eigen::Infinity>(), 1e-12});
  return (next - prev).lpNorm<Eigen::Infinity>() / scale;
}

Field solve_equation(const CoefficientSet& coeffs, int eq, const Mesh& mesh,
                     const ElementStates& states, const BoundaryData& boundary,
                     const SolverOptions& options, std::vector<LinearSolveReport>& reports) {
  const ScalarProblem problem = frozen_problem(coeffs, eq, mesh, states, boundary[eq]);
  LinearSolution sol = solve_linear(mesh, assemble(mesh, problem), options.linear_tol);
  reports.push_back({eq, sol.iterations, sol.residual});
  return std::move(sol.field);
}

}  // namespace

FixedPointState fixed_point_step(const FixedPointState& state, const CoefficientSet& coeffs,
                                 const BoundaryData& boundary, const SolverOptions& options) {
  const std::vector<Field>& frozen = state.current;
  const Mesh& mesh = frozen.front().mesh();
  const int potential = coeffs.potential_index();
  const int energy = coeffs.energy_index();

  FixedPointState next;
  next.iteration = state.iteration + 1;
  next.theta = state.theta;
  next.previous = frozen;
  std::vector<Field> fresh(frozen.size());

  ElementStates states = element_states(frozen);
  fresh[potential] = solve_equation(coeffs, potential, mesh, states, boundary, options, next.solves);

  // Ion drifts see the fresh potential; all other data stay frozen.
  for (int t = 0; t < mesh.triangle_count(); ++t)
    states.gradients[potential].col(t) = fresh[potential].gradient(t);
  for (int i = 0; i < potential; ++i)
    fresh[i] = solve_equation(coeffs, i, mesh, states, boundary, options, next.solves);

  std::vector<Field> energy_inputs(fresh.begin(), fresh.begin() + energy);
  energy_inputs.push_back(frozen[energy]);
  fresh[energy] = solve_equation(coeffs, energy, mesh, element_states(energy_inputs), boundary,
                                 options, next.solves);
  if (coeffs.positive_energy()) {
    energy_inputs.back() = fresh[energy];
    check_nodal_states(coeffs, energy_inputs);
  }

  next.current.reserve(fresh.size());
  for (std::size_t i = 0; i < fresh.size(); ++i) {
    Eigen::VectorXd v = state.theta * fresh[i].values() + (1.0 - state.theta) * frozen[i].values();
    next.changes.push_back(relative_change(v, frozen[i].values()));
    next.current.emplace_back(mesh, std::move(v));
  }
  return next;
}

std::vector<Field> harmonic_initial_guess(const Mesh& mesh, const BoundaryData& boundary) {
  std::vector<Field> out;
  for (const auto& g : boundary) {
    ScalarProblem p = ScalarProblem::laplace(mesh);
    p.dirichlet_values = g;
    out.push_back(solve_linear(mesh, assemble(mesh, p)).field);
  }
  return out;
}

std::vector<Field> random_initial_guess(const CoefficientSet& coeffs, const Mesh& mesh,
                                        const BoundaryData& boundary, double amplitude,
                                        std::uint64_t seed) {
  std::vector<Field> out = harmonic_initial_guess(mesh, boundary);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int i = 0; i < static_cast<int>(out.size()); ++i) {
    auto& v = out[i].values();
    const bool multiplicative = i == coeffs.energy_index() && coeffs.positive_energy();
    for (int k = 0; k < v.size(); ++k) {
      if (multiplicative)
        v[k] *= 1.0 + std::min(amplitude, 0.9) * unit(rng);
      else
        v[k] += amplitude * unit(rng);
    }
  }
  return out;
}

SystemSolution solve_system(const CoefficientSet& coeffs, const Mesh& mesh,
                            const BoundaryData& boundary, const SolverOptions& options,
                            std::optional<std::vector<Field>> initial) {
  if (static_cast<int>(boundary.size()) != coeffs.component_count())
    throw ContractError("boundary data must have one entry per component");
  SystemSolution out;
  ConvergenceReport& report = out.report;
  FixedPointState state;
  state.theta = options.theta;
  state.current = initial ? std::move(*initial) : harmonic_initial_guess(mesh, boundary);
  const int energy = coeffs.energy_index();
  const auto finish = [&](Status status, std::string message = {}) {
    report.status = status;
    report.message = std::move(message);
    report.theta = state.theta;
    report.min_u = state.current[energy].values().minCoeff();
    out.fields = state.current;
    return out;
  };

  try {
    check_nodal_states(coeffs, state.current);
    report.residuals = equation_residuals(state.current, coeffs, boundary);
  } catch (const Error& e) {
    return finish(Status::Diverged, std::string("initial guess rejected: ") + e.what());
  }
  if (options.max_iter <= 0) return finish(Status::Stalled, "no iterations allowed");

  std::vector<double> history;
  for (int k = 1; k <= options.max_iter; ++k) {
    FixedPointState next;
    try {
      next = fixed_point_step(state, coeffs, boundary, options);
      report.residuals = equation_residuals(next.current, coeffs, boundary);
    } catch (const Error& e) {
      return finish(Status::Diverged, e.what());
    }
    state = std::move(next);
    report.iterations = k;
    report.change = *std::max_element(state.changes.begin(), state.changes.end());
    if (!std::isfinite(report.change) || report.change > options.divergence_limit)
      return finish(Status::Diverged, "successive change exceeded the divergence limit");
    const double res = *std::max_element(report.residuals.begin(), report.residuals.end());
    if (report.change <= options.tol && res <= options.res_tol) return finish(Status::Converged);

    history.push_back(res);
    const std::size_t h = history.size();
    if (h >= 3 && history[h - 1] > history[h - 2] && history[h - 2] > history[h - 3] &&
        state.theta > options.theta_min) {
      state.theta = std::max(0.5 * state.theta, options.theta_min);
      history.clear();
    }
  }
  return finish(Status::Stalled, "iteration limit reached");
}

}  // namespace ee
