#pragma once

#include <string>
#include <vector>

#include "ee/decay.hpp"
#include "ee/iteration.hpp"

namespace ee {

/// Centroid of the bounding box, its four quarter points (those inside the
/// domain) and every corner node.
std::vector<Point> default_centers(const Mesh& mesh);

/// sup over centers x radii of r^-alpha int_{B_r cap Omega} |f|^p.
/// Throws ContractError for empty lists, p < 1 or alpha outside (0, 2].
double morrey_seminorm(const Field& f, double p, double alpha, const std::vector<Point>& centers,
                       const std::vector<double>& radii);

/// q(r) = int_{B_r cap Omega} |grad f|^2. Throws FitError when the fit is
/// impossible (e.g. f constant).
DecayReport gradient_energy_decay(const Field& f, const Point& center,
                                  const std::vector<double>& radii);

/// q(r) = int_{B_r cap Omega} |Pi| per center. A vanishing measure (every
/// q <= 1e-10) is not an error here: the report is left unfitted with a notice.
std::vector<DecayReport> dissipation_decay(const CoefficientSet& coeffs,
                                           const std::vector<Field>& fields,
                                           const std::vector<Point>& centers,
                                           const std::vector<double>& radii);

/// q(r) = max - min of nodal values in B_r cap Omega; beta clipped to [0, 1]
/// with the raw slope kept. Radii whose ball holds a single node leave the
/// fit window. Oscillations all below 1e-13 give beta = 1 and a
/// constant-field notice.
std::vector<DecayReport> oscillation_hoelder(const Field& f, const std::vector<Point>& centers,
                                             const std::vector<double>& radii);

struct ComponentBounds {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  double boundary_min = 0.0;  ///< over Dirichlet nodes
  double boundary_max = 0.0;
  double margin = 0.0;        ///< max(0, max - boundary_max) + max(0, boundary_min - min)
};

struct BoundsReport {
  std::vector<ComponentBounds> components;
};

/// Interior versus boundary range per component. Without Dirichlet nodes the
/// boundary range equals the interior range.
BoundsReport linf_bounds(const CoefficientSet& coeffs, const std::vector<Field>& fields,
                         const BoundaryData& boundary);

/// result[i][k] = ||grad w_i||_{L^t_k}. Throws ContractError for t < 1.
std::vector<std::vector<double>> lp_gradient_norms(const std::vector<Field>& fields,
                                                   const std::vector<double>& t_list);

enum class Verdict { UniqueAtTol, Distinct, Inconclusive };
std::string to_string(Verdict v);

struct UniquenessProbe {
  ConvergenceReport first;
  ConvergenceReport second;
  std::vector<double> distance;  ///< ||w1 - w2||_inf / max(||w1||_inf, 1e-12) per component
  double data_magnitude = 0.0;
  double threshold = 0.0;        ///< 100 tol
  Verdict verdict = Verdict::Inconclusive;
};

/// Solves twice from the given initial guesses and compares the results.
UniquenessProbe uniqueness_probe(const Model& model, const Mesh& mesh,
                                 const SolverOptions& options, std::vector<Field> guess1,
                                 std::vector<Field> guess2);

/// zeta^T R for equation i with zeta = w_i - extension_i (zero on the
/// Dirichlet set): the discrete Galerkin energy identity.
WeakResidual galerkin_identity(const CoefficientSet& coeffs, const std::vector<Field>& fields,
                               const Field& extension, int equation);

struct TruncationCheck {
  double level = 0.0;
  WeakResidual residual;  ///< value = g^T R for g = T_L(u - u^S)
};

/// Energy equation tested with truncations T_L(u - u^S), L = ||u - u^S||_inf
/// 10^-k for k = 0..levels-1. Empty when u = u^S.
std::vector<TruncationCheck> truncation_checks(const CoefficientSet& coeffs,
                                               const std::vector<Field>& fields,
                                               const Field& extension, int levels = 6);

}  // namespace ee
