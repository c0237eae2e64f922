#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "ee/mesh.hpp"

namespace ee {

/// Power-law fit q(r) ~ C r^beta of a local quantity sampled on a family of
/// balls around one center.
struct DecayReport {
  Point center = Point::Zero();
  std::vector<double> radii;  ///< strictly decreasing
  std::vector<double> q;      ///< q[k] belongs to radii[k]
  double beta = std::numeric_limits<double>::quiet_NaN();
  double raw_beta = std::numeric_limits<double>::quiet_NaN();  ///< before any clipping
  double residual = std::numeric_limits<double>::quiet_NaN();
  int window_begin = 0;  ///< inclusive index range into radii
  int window_end = 0;
  bool fitted = false;
  std::string notice;
};

struct DecayFit {
  double beta = 0.0;
  double residual = 0.0;  ///< RMS of the log-log fit
};

/// Least squares on (log r, log q) over samples[first..last] (inclusive).
/// Throws FitError with fewer than three samples or a nonpositive q.
DecayFit fit_decay_exponent(const std::vector<std::pair<double, double>>& samples, int first,
                            int last);

/// Default window for n radii in decreasing order: drops the largest radius
/// and the two smallest, i.e. indices [1, n-3].
std::pair<int, int> default_fit_window(int n);

/// Fills radii/q, checks that q is non-decreasing in r and fits over the
/// default window. With trim_vanishing the window end is pulled back past
/// radii whose q vanishes (balls holding a single node). Throws ContractError
/// on a monotonicity violation and FitError when the fit is impossible.
DecayReport make_decay_report(const Point& center, std::vector<double> radii,
                              std::vector<double> q, bool trim_vanishing = false);

}  // namespace ee
