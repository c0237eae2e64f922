#include "ee/kirchhoff.hpp"

#include <cmath>
#include <string>

#include "ee/errors.hpp"

namespace ee {

namespace {

double checked(const Conductivity& kappa, double s) {
  const double k = kappa(s);
  if (!(k > 0.0) || !std::isfinite(k))
    throw ModelError("heat conductivity not strictly positive at T = " + std::to_string(s));
  return k;
}

double simpson(const Conductivity& kappa, double a, double fa, double b, double fb, double m,
               double fm, double whole, double eps, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = checked(kappa, lm), frm = checked(kappa, rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
  return simpson(kappa, a, fa, m, fm, lm, flm, left, 0.5 * eps, depth - 1) +
         simpson(kappa, m, fm, b, fb, rm, frm, right, 0.5 * eps, depth - 1);
}

}  // namespace

double kirchhoff(const Conductivity& kappa, double temperature) {
  if (temperature == 0.0) {
    checked(kappa, 0.0);
    return 0.0;
  }
  const double a = 0.0, b = temperature, m = 0.5 * (a + b);
  const double fa = checked(kappa, a), fb = checked(kappa, b), fm = checked(kappa, m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double eps = 1e-13 * std::max(1.0, std::abs(whole));
  return simpson(kappa, a, fa, b, fb, m, fm, whole, eps, 40);
}

double kirchhoff_inverse(const Conductivity& kappa, double u) {
  return kirchhoff_inverse(kappa, [&kappa](double t) { return kirchhoff(kappa, t); }, u);
}

double kirchhoff_inverse(const Conductivity& kappa, const Conductivity& primitive, double u) {
  if (u == 0.0) return 0.0;
  // Bracket the root of k(T) - u; k is strictly increasing with k(0) = 0.
  double lo = 0.0, hi = 0.0;
  double step = std::max(1.0, std::abs(u) / checked(kappa, 0.0));
  for (int i = 0; i < 200; ++i) {
    const double probe = u > 0 ? step : -step;
    const double k = primitive(probe);
    if ((u > 0 && k >= u) || (u < 0 && k <= u)) {
      (u > 0 ? hi : lo) = probe;
      break;
    }
    (u > 0 ? lo : hi) = probe;
    step *= 2.0;
    if (i == 199) throw ModelError("Kirchhoff transform cannot reach u = " + std::to_string(u));
  }
  const double tol = 1e-12 * std::max(1.0, std::abs(u));
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double r = primitive(t) - u;
    if (std::abs(r) <= tol) return t;
    (r > 0 ? hi : lo) = t;
    double next = t - r / checked(kappa, t);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 1e-15 * std::max(1.0, std::abs(t))) return next;
    t = next;
  }
  return t;
}

}  // namespace ee
