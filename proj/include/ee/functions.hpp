#pragma once

#include <map>
#include <string>
#include <utility>

namespace ee {

/// Scalar constitutive function of one state variable, selected by name from
/// a small registry:
///   constant      { value }                       c
///   affine        { c0, c1 }                      c0 + c1 s
///   tanh_bounded  { center, amplitude, rate, shift }  center + amplitude tanh(rate (s - shift))
///   exp_mobility  { scale, rate }                 scale exp(rate s)
class ScalarFunction {
 public:
  enum class Kind { Constant, Affine, TanhBounded, ExpMobility };

  ScalarFunction() = default;

  static ScalarFunction constant(double value);
  static ScalarFunction affine(double c0, double c1);
  static ScalarFunction tanh_bounded(double center, double amplitude, double rate = 1.0,
                                     double shift = 0.0);
  static ScalarFunction exp_mobility(double scale, double rate);

  /// Throws ConfigError when the name is unknown or a parameter is missing
  /// or unexpected; the message names the offending entry.
  static ScalarFunction from_registry(const std::string& name,
                                      const std::map<std::string, double>& params);

  double operator()(double s) const;
  double derivative(double s) const;
  /// Closed-form int_0^s f.
  double integral(double s) const;

  /// Exact minimum and maximum over [lo, hi] (all registry functions are
  /// monotone, so the extremes sit at the endpoints).
  std::pair<double, double> range(double lo, double hi) const;

  bool is_constant() const;
  Kind kind() const { return kind_; }
  std::string name() const;
  std::map<std::string, double> parameters() const;

 private:
  Kind kind_ = Kind::Constant;
  double p0_ = 1.0, p1_ = 0.0, p2_ = 1.0, p3_ = 0.0;
};

}  // namespace ee
