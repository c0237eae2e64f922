#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ee/models.hpp"

namespace ee {

struct SolverOptions {
  double tol = 1e-10;       ///< successive relative change
  double res_tol = 1e-9;    ///< weak residual per equation
  int max_iter = 200;
  double theta = 1.0;       ///< initial damping
  double theta_min = 1.0 / 16.0;
  double linear_tol = 1e-12;
  double divergence_limit = 1e6;
};

struct LinearSolveReport {
  int equation = 0;
  int iterations = 0;
  double residual = 0.0;
};

struct FixedPointState {
  std::vector<Field> previous;  ///< (rho^, u^)
  std::vector<Field> current;   ///< (rho, u)
  int iteration = 0;
  std::vector<LinearSolveReport> solves;
  std::vector<double> changes;  ///< per component, relative max-norm change of the last step
  double theta = 1.0;
};

enum class Status { Converged, Stalled, Diverged };

std::string to_string(Status status);

struct ConvergenceReport {
  int iterations = 0;
  double change = 0.0;
  std::vector<double> residuals;
  double min_u = 0.0;
  Status status = Status::Stalled;
  double theta = 1.0;
  std::string message;
};

struct SystemSolution {
  std::vector<Field> fields;
  ConvergenceReport report;
};

/// One Gauss-Seidel sweep with coefficients frozen at state.current:
/// potential equation, then every other transport equation with the fresh
/// potential gradient in the drift, then the energy equation with Pi from the
/// fresh transport fields; finally damped with state.theta.
/// Throws SolverFailure if a linear solve fails and StateError if the fresh
/// energy variable leaves the admissible set.
FixedPointState fixed_point_step(const FixedPointState& state, const CoefficientSet& coeffs,
                                 const BoundaryData& boundary,
                                 const SolverOptions& options = {});

/// Per component: discrete harmonic extension of the boundary data.
std::vector<Field> harmonic_initial_guess(const Mesh& mesh, const BoundaryData& boundary);

/// Iterates fixed_point_step to a fixed point. Non-convergence is reported,
/// not thrown: status Stalled after max_iter, Diverged when the change
/// exceeds the divergence limit or a step fails.
SystemSolution solve_system(const CoefficientSet& coeffs, const Mesh& mesh,
                            const BoundaryData& boundary, const SolverOptions& options = {},
                            std::optional<std::vector<Field>> initial = std::nullopt);

/// Harmonic guess plus a uniform random perturbation of the given amplitude
/// (multiplicative for a positive energy variable), seeded.
std::vector<Field> random_initial_guess(const CoefficientSet& coeffs, const Mesh& mesh,
                                        const BoundaryData& boundary, double amplitude,
                                        std::uint64_t seed);

}  // namespace ee
