#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ee/coefficients.hpp"

namespace ee {

/// Sampled structural constants of a coefficient set:
///   nu_i <= a_i(x, w) <= mu_i            (ellipticity)
///   |Pi(x, w, z)| <= sum_i omega_i |z_i|^2  (critical growth)
/// and L = max_i omega_i / nu_i.
struct GrowthCertificate {
  std::vector<double> nu;
  std::vector<double> mu;
  std::vector<double> omega;
  double growth_ratio = 0.0;  ///< L
  int samples = 0;
  std::vector<std::pair<double, double>> box;
  /// Largest |Pi| / sum omega_i |z_i|^2 seen on random gradients (<= 1).
  double max_bound_usage = 0.0;
};

/// Corner plus Monte-Carlo sampling of the state box (one interval per
/// component). Pi is read as a quadratic form in the gradients: its
/// coefficient matrix Q(w) is recovered by polarization and
/// omega_i = sup_w sum_j |Q_ij(w)|. Random gradients then confirm the bound;
/// if a sample exceeds it, all omega_i are raised to cover it.
/// Throws CoefficientError when a sampled a_i <= 0 and ContractError when
/// samples < 1000 or the box leaves the admissible set.
GrowthCertificate certify_growth(const CoefficientSet& coeffs,
                                 const std::vector<std::pair<double, double>>& box,
                                 int samples = 4000, std::uint64_t seed = 1,
                                 const Point& x = Point::Zero());

}  // namespace ee
