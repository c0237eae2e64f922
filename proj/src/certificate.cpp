#include "ee/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "ee/errors.hpp"

namespace ee {

namespace {

// Symmetric coefficient matrix of the isotropic quadratic form
// Pi = sum_ij Q_ij z_i . z_j, by polarization along one direction.
Eigen::MatrixXd dissipation_form(const CoefficientSet& coeffs, const Point& x, const State& w) {
  const int n = coeffs.component_count();
  Gradients z = Gradients::Zero(n, 2);
  Eigen::VectorXd diag(n);
  for (int i = 0; i < n; ++i) {
    z.setZero();
    z(i, 0) = 1.0;
    diag[i] = coeffs.dissipation(x, w, z);
  }
  Eigen::MatrixXd q(n, n);
  for (int i = 0; i < n; ++i) {
    q(i, i) = diag[i];
    for (int j = i + 1; j < n; ++j) {
      z.setZero();
      z(i, 0) = 1.0;
      z(j, 0) = 1.0;
      q(i, j) = q(j, i) = 0.5 * (coeffs.dissipation(x, w, z) - diag[i] - diag[j]);
    }
  }
  return q;
}

std::string describe(const State& w) {
  std::ostringstream os;
  os << "w = (";
  for (int i = 0; i < w.size(); ++i) os << (i ? ", " : "") << w[i];
  os << ")";
  return os.str();
}

}  // namespace

GrowthCertificate certify_growth(const CoefficientSet& coeffs,
                                 const std::vector<std::pair<double, double>>& box, int samples,
                                 std::uint64_t seed, const Point& x) {
  const int n = coeffs.component_count();
  if (static_cast<int>(box.size()) != n)
    throw ContractError("state box must have one interval per component");
  if (samples < 1000) throw ContractError("certify_growth needs at least 1000 samples");
  for (const auto& [lo, hi] : box)
    if (!(lo <= hi)) throw ContractError("state box interval is empty");

  std::vector<State> states;
  for (int mask = 0; mask < (1 << n); ++mask) {
    State w(n);
    for (int i = 0; i < n; ++i) w[i] = (mask >> i) & 1 ? box[i].second : box[i].first;
    states.push_back(w);
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (static_cast<int>(states.size()) < samples) {
    State w(n);
    for (int i = 0; i < n; ++i) w[i] = box[i].first + unit(rng) * (box[i].second - box[i].first);
    states.push_back(w);
  }

  GrowthCertificate cert;
  cert.box = box;
  cert.samples = static_cast<int>(states.size());
  cert.nu.assign(n, std::numeric_limits<double>::infinity());
  cert.mu.assign(n, -std::numeric_limits<double>::infinity());
  cert.omega.assign(n, 0.0);
  for (const State& w : states) {
    if (!coeffs.admissible(w))
      throw ContractError("state box leaves the admissible set at " + describe(w));
    for (int eq = 0; eq < n; ++eq) {
      const double a = coeffs.leading(eq, x, w);
      if (!(a > 0.0))
        throw CoefficientError("leading coefficient a_" + std::to_string(eq + 1) + " = " +
                               std::to_string(a) + " <= 0 at sample " + describe(w));
      cert.nu[eq] = std::min(cert.nu[eq], a);
      cert.mu[eq] = std::max(cert.mu[eq], a);
    }
    const Eigen::MatrixXd q = dissipation_form(coeffs, x, w);
    for (int i = 0; i < n; ++i) cert.omega[i] = std::max(cert.omega[i], q.row(i).cwiseAbs().sum());
  }

  // Random gradients must respect the bound; otherwise widen it.
  std::normal_distribution<double> gauss(0.0, 1.0);
  double worst = 0.0;
  for (const State& w : states) {
    Gradients z(n, 2);
    for (int i = 0; i < n; ++i) z.row(i) << gauss(rng), gauss(rng);
    double bound = 0.0;
    for (int i = 0; i < n; ++i) bound += cert.omega[i] * z.row(i).squaredNorm();
    const double pi = std::abs(coeffs.dissipation(x, w, z));
    if (bound > 0.0)
      worst = std::max(worst, pi / bound);
    else if (pi > 0.0)
      worst = std::numeric_limits<double>::infinity();
  }
  if (worst > 1.0 + 1e-12) {
    if (!std::isfinite(worst)) throw CoefficientError("dissipation not bounded by gradients");
    for (double& w : cert.omega) w *= worst;
    worst = 1.0;
  }
  cert.max_bound_usage = worst;
  for (int i = 0; i < n; ++i)
    cert.growth_ratio = std::max(cert.growth_ratio, cert.omega[i] / cert.nu[i]);
  return cert;
}

}  // namespace ee
