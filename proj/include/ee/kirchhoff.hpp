#pragma once

#include <functional>

namespace ee {

using Conductivity = std::function<double(double)>;

/// k(T) = int_0^T kappa(s) ds by adaptive Simpson quadrature (tolerance 1e-12).
/// Throws ModelError if kappa is not strictly positive at a sampled point.
double kirchhoff(const Conductivity& kappa, double temperature);

/// Inverse of the Kirchhoff transform: T with k(T) = u, by bracketed Newton
/// iteration with bisection fallback (tolerance 1e-12).
double kirchhoff_inverse(const Conductivity& kappa, double u);

/// Same with a known primitive k (k(0) = 0) in place of the quadrature.
double kirchhoff_inverse(const Conductivity& kappa, const Conductivity& primitive, double u);

}  // namespace ee
