#include "ee/functions.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "ee/errors.hpp"

namespace ee {

ScalarFunction ScalarFunction::constant(double value) {
  ScalarFunction f;
  f.kind_ = Kind::Constant;
  f.p0_ = value;
  return f;
}

ScalarFunction ScalarFunction::affine(double c0, double c1) {
  ScalarFunction f;
  f.kind_ = Kind::Affine;
  f.p0_ = c0;
  f.p1_ = c1;
  return f;
}

ScalarFunction ScalarFunction::tanh_bounded(double center, double amplitude, double rate,
                                            double shift) {
  ScalarFunction f;
  f.kind_ = Kind::TanhBounded;
  f.p0_ = center;
  f.p1_ = amplitude;
  f.p2_ = rate;
  f.p3_ = shift;
  return f;
}

ScalarFunction ScalarFunction::exp_mobility(double scale, double rate) {
  ScalarFunction f;
  f.kind_ = Kind::ExpMobility;
  f.p0_ = scale;
  f.p1_ = rate;
  return f;
}

ScalarFunction ScalarFunction::from_registry(const std::string& name,
                                             const std::map<std::string, double>& params) {
  struct Entry {
    std::vector<std::string> required;
    std::vector<std::string> optional;
  };
  static const std::map<std::string, Entry> registry = {
      {"constant", {{"value"}, {}}},
      {"affine", {{"c0", "c1"}, {}}},
      {"tanh_bounded", {{"center", "amplitude"}, {"rate", "shift"}}},
      {"exp_mobility", {{"scale", "rate"}, {}}},
  };
  const auto it = registry.find(name);
  if (it == registry.end()) throw ConfigError("unknown coefficient function '" + name + "'");
  std::set<std::string> allowed(it->second.required.begin(), it->second.required.end());
  allowed.insert(it->second.optional.begin(), it->second.optional.end());
  for (const auto& [key, value] : params) {
    if (!allowed.count(key))
      throw ConfigError("coefficient function '" + name + "' has no parameter '" + key + "'");
    if (!std::isfinite(value))
      throw ConfigError("coefficient function '" + name + "' parameter '" + key + "' not finite");
  }
  for (const auto& key : it->second.required)
    if (!params.count(key))
      throw ConfigError("coefficient function '" + name + "' is missing parameter '" + key + "'");
  const auto get = [&](const std::string& key, double fallback) {
    const auto p = params.find(key);
    return p == params.end() ? fallback : p->second;
  };
  if (name == "constant") return constant(get("value", 0));
  if (name == "affine") return affine(get("c0", 0), get("c1", 0));
  if (name == "tanh_bounded")
    return tanh_bounded(get("center", 0), get("amplitude", 0), get("rate", 1), get("shift", 0));
  return exp_mobility(get("scale", 0), get("rate", 0));
}

double ScalarFunction::operator()(double s) const {
  switch (kind_) {
    case Kind::Constant: return p0_;
    case Kind::Affine: return p0_ + p1_ * s;
    case Kind::TanhBounded: return p0_ + p1_ * std::tanh(p2_ * (s - p3_));
    case Kind::ExpMobility: return p0_ * std::exp(p1_ * s);
  }
  return 0.0;
}

double ScalarFunction::integral(double s) const {
  const auto log_cosh = [](double x) {
    const double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
  };
  switch (kind_) {
    case Kind::Constant: return p0_ * s;
    case Kind::Affine: return p0_ * s + 0.5 * p1_ * s * s;
    case Kind::TanhBounded:
      if (p2_ == 0.0) return (p0_ + p1_ * std::tanh(-p2_ * p3_)) * s;
      return p0_ * s + p1_ / p2_ * (log_cosh(p2_ * (s - p3_)) - log_cosh(-p2_ * p3_));
    case Kind::ExpMobility:
      if (p1_ == 0.0) return p0_ * s;
      return p0_ / p1_ * std::expm1(p1_ * s);
  }
  return 0.0;
}

double ScalarFunction::derivative(double s) const {
  switch (kind_) {
    case Kind::Constant: return 0.0;
    case Kind::Affine: return p1_;
    case Kind::TanhBounded: {
      const double c = std::cosh(p2_ * (s - p3_));
      return p1_ * p2_ / (c * c);
    }
    case Kind::ExpMobility: return p0_ * p1_ * std::exp(p1_ * s);
  }
  return 0.0;
}

std::pair<double, double> ScalarFunction::range(double lo, double hi) const {
  const double a = (*this)(lo), b = (*this)(hi);
  return {std::min(a, b), std::max(a, b)};
}

bool ScalarFunction::is_constant() const {
  switch (kind_) {
    case Kind::Constant: return true;
    case Kind::Affine: return p1_ == 0.0;
    case Kind::TanhBounded: return p1_ == 0.0 || p2_ == 0.0;
    case Kind::ExpMobility: return p0_ == 0.0 || p1_ == 0.0;
  }
  return false;
}

std::string ScalarFunction::name() const {
  switch (kind_) {
    case Kind::Constant: return "constant";
    case Kind::Affine: return "affine";
    case Kind::TanhBounded: return "tanh_bounded";
    case Kind::ExpMobility: return "exp_mobility";
  }
  return "";
}

std::map<std::string, double> ScalarFunction::parameters() const {
  switch (kind_) {
    case Kind::Constant: return {{"value", p0_}};
    case Kind::Affine: return {{"c0", p0_}, {"c1", p1_}};
    case Kind::TanhBounded:
      return {{"center", p0_}, {"amplitude", p1_}, {"rate", p2_}, {"shift", p3_}};
    case Kind::ExpMobility: return {{"scale", p0_}, {"rate", p1_}};
  }
  return {};
}

}  // namespace ee
