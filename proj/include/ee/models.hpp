#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ee/coefficients.hpp"
#include "ee/functions.hpp"

namespace ee {

using SpatialFunction = std::function<double(const Point&)>;

/// Nodal extensions of the boundary data, one vector per component.
using BoundaryData = std::vector<Eigen::VectorXd>;

/// Common surface of the bundled models.
class Model : public CoefficientSet {
 public:
  /// Nodal interpolant of the Dirichlet data of every component.
  virtual BoundaryData boundary_values(const Mesh& mesh) const = 0;
  /// Magnitude proxy of the data: sum of boundary-data gradient norms plus |h|.
  virtual double data_magnitude(const Mesh& mesh) const;
};

struct ThermistorParams {
  ScalarFunction sigma = ScalarFunction::constant(1.0);  ///< electrical conductivity of T
  ScalarFunction kappa = ScalarFunction::constant(1.0);  ///< heat conductivity of T
  SpatialFunction heat_source = [](const Point&) { return 0.0; };
  SpatialFunction phi_boundary = [](const Point&) { return 0.0; };
  SpatialFunction temperature_boundary = [](const Point&) { return 0.0; };
};

/// Stationary thermistor in Kirchhoff variables: rho = phi, u = k(T),
///   -div(sigma(k^-1(u)) grad phi) = 0,
///   -Laplace u = sigma(k^-1(u)) |grad phi|^2 + h.
class ThermistorModel final : public Model {
 public:
  explicit ThermistorModel(ThermistorParams params);

  int transport_count() const override { return 1; }
  std::string component_name(int i) const override { return i == 0 ? "phi" : "u"; }
  double leading(int eq, const Point& x, const State& w) const override;
  double lower_order(int eq, const Point& x, const State& w) const override;
  double dissipation(const Point& x, const State& w, const Gradients& z) const override;

  BoundaryData boundary_values(const Mesh& mesh) const override;
  double data_magnitude(const Mesh& mesh) const override;

  /// sigma(k^-1(u)).
  double sigma_hat(double u) const;
  double kirchhoff(double temperature) const;
  double temperature(double u) const;
  const ThermistorParams& params() const { return params_; }

 private:
  ThermistorParams params_;
};

/// Builds the thermistor coefficient set; throws ModelError when kappa is
/// not strictly positive on a probe set.
ThermistorModel thermistor_coefficients(const ThermistorParams& params);

struct Species {
  double charge = 1.0;                                         ///< upsilon_i
  ScalarFunction diffusivity = ScalarFunction::constant(1.0);  ///< d_i(u)
  SpatialFunction boundary = [](const Point&) { return 0.0; }; ///< rho_i^S
};

struct NernstPlanckParams {
  std::vector<Species> species;
  ScalarFunction permittivity = ScalarFunction::constant(1.0);  ///< eps(u)
  ScalarFunction kappa = ScalarFunction::constant(1.0);         ///< kappa(u)
  SpatialFunction phi_boundary = [](const Point&) { return 0.0; };
  SpatialFunction temperature_boundary = [](const Point&) { return 1.0; };
  double u_min = 1e-8;
};

/// Non-isothermal Nernst-Planck system in entropic variables
/// (rho_1..rho_{N-1}, phi, u = T), mobility m_i = d_i(u) exp(rho_i).
class NernstPlanckModel final : public Model {
 public:
  explicit NernstPlanckModel(NernstPlanckParams params);

  int transport_count() const override { return static_cast<int>(params_.species.size()) + 1; }
  std::string component_name(int i) const override;
  double leading(int eq, const Point& x, const State& w) const override;
  Eigen::Vector2d drift(int eq, const Point& x, const State& w, const Gradients& z) const override;
  double dissipation(const Point& x, const State& w, const Gradients& z) const override;
  bool admissible(const State& w) const override;
  bool positive_energy() const override { return true; }

  BoundaryData boundary_values(const Mesh& mesh) const override;

  double mobility(int species, const State& w) const;
  const NernstPlanckParams& params() const { return params_; }

 private:
  double checked_temperature(const State& w) const;
  NernstPlanckParams params_;
};

NernstPlanckModel np_coefficients(const NernstPlanckParams& params);

struct EntropyBalance {
  double boundary_flux = 0.0;  ///< int over the boundary of (q/T - sum j_i rho_i) . n
  double production = 0.0;     ///< int sum |j_i|^2/m_i + kappa |grad T|^2 / T^2
  double min_local_production = 0.0;
  double residual = 0.0;       ///< |flux - production| / production (absolute if production ~ 0)
};

/// Discrete entropy balance tested against the constant one.
EntropyBalance entropy_residual(const NernstPlanckModel& model, const std::vector<Field>& fields);

}  // namespace ee
