#include "ee/decay.hpp"

#include <algorithm>
#include <cmath>

#include "ee/errors.hpp"

namespace ee {

DecayFit fit_decay_exponent(const std::vector<std::pair<double, double>>& samples, int first,
                            int last) {
  if (first < 0 || last >= static_cast<int>(samples.size()) || last - first + 1 < 3)
    throw FitError("decay fit needs at least 3 samples in the window");
  const int n = last - first + 1;
  Eigen::MatrixXd a(n, 2);
  Eigen::VectorXd y(n);
  for (int k = 0; k < n; ++k) {
    const auto [r, q] = samples[first + k];
    if (!(r > 0.0) || !(q > 0.0))
      throw FitError("decay fit needs positive radii and quantities (q = " + std::to_string(q) +
                     " at r = " + std::to_string(r) + ")");
    a(k, 0) = std::log(r);
    a(k, 1) = 1.0;
    y[k] = std::log(q);
  }
  const Eigen::Vector2d c = a.colPivHouseholderQr().solve(y);
  DecayFit fit;
  fit.beta = c[0];
  fit.residual = std::sqrt((a * c - y).squaredNorm() / n);
  return fit;
}

std::pair<int, int> default_fit_window(int n) { return {1, n - 3}; }

DecayReport make_decay_report(const Point& center, std::vector<double> radii,
                              std::vector<double> q, bool trim_vanishing) {
  DecayReport rep;
  rep.center = center;
  rep.radii = std::move(radii);
  rep.q = std::move(q);
  const int n = static_cast<int>(rep.radii.size());
  const double top = n ? *std::max_element(rep.q.begin(), rep.q.end()) : 0.0;
  for (int k = 1; k < n; ++k)
    if (rep.q[k] > rep.q[k - 1] + 1e-12 * std::max(top, 1.0))
      throw ContractError("decay quantity increases as the radius shrinks");
  std::tie(rep.window_begin, rep.window_end) = default_fit_window(n);
  if (trim_vanishing)
    while (rep.window_end > rep.window_begin && !(rep.q[rep.window_end] > 0.0)) --rep.window_end;
  std::vector<std::pair<double, double>> samples;
  for (int k = 0; k < n; ++k) samples.emplace_back(rep.radii[k], rep.q[k]);
  const DecayFit fit = fit_decay_exponent(samples, rep.window_begin, rep.window_end);
  rep.beta = rep.raw_beta = fit.beta;
  rep.residual = fit.residual;
  rep.fitted = true;
  return rep;
}

}  // namespace ee
