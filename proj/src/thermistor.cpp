#include <cmath>

#include "ee/errors.hpp"
#include "ee/kirchhoff.hpp"
#include "ee/models.hpp"

namespace ee {

double Model::data_magnitude(const Mesh& mesh) const {
  double sum = 0.0;
  for (const auto& v : boundary_values(mesh)) sum += h1_seminorm(Field(mesh, v));
  return sum;
}

ThermistorModel::ThermistorModel(ThermistorParams params) : params_(std::move(params)) {
  for (double t : {-10.0, -1.0, 0.0, 1.0, 10.0}) {
    const double k = params_.kappa(t);
    if (!(k > 0.0))
      throw ModelError("heat conductivity must be strictly positive (kappa(" + std::to_string(t) +
                       ") = " + std::to_string(k) + ")");
  }
}

double ThermistorModel::kirchhoff(double temperature) const {
  if (params_.kappa.is_constant()) return params_.kappa(0.0) * temperature;
  return params_.kappa.integral(temperature);
}

double ThermistorModel::temperature(double u) const {
  if (params_.kappa.is_constant()) return u / params_.kappa(0.0);
  const ScalarFunction& k = params_.kappa;
  return kirchhoff_inverse([&k](double t) { return k(t); }, [&k](double t) { return k.integral(t); },
                           u);
}

double ThermistorModel::sigma_hat(double u) const {
  if (params_.sigma.is_constant()) return params_.sigma(0.0);
  return params_.sigma(temperature(u));
}

double ThermistorModel::leading(int eq, const Point&, const State& w) const {
  return eq == 0 ? sigma_hat(w[1]) : 1.0;
}

double ThermistorModel::lower_order(int eq, const Point& x, const State&) const {
  return eq == 1 ? -params_.heat_source(x) : 0.0;
}

double ThermistorModel::dissipation(const Point&, const State& w, const Gradients& z) const {
  return sigma_hat(w[1]) * z.row(0).squaredNorm();
}

BoundaryData ThermistorModel::boundary_values(const Mesh& mesh) const {
  Eigen::VectorXd phi(mesh.node_count()), u(mesh.node_count());
  for (int i = 0; i < mesh.node_count(); ++i) {
    phi[i] = params_.phi_boundary(mesh.node(i));
    u[i] = kirchhoff(params_.temperature_boundary(mesh.node(i)));
  }
  return {phi, u};
}

double ThermistorModel::data_magnitude(const Mesh& mesh) const {
  double h_l1 = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t)
    h_l1 += mesh.area(t) * std::abs(params_.heat_source(mesh.centroid(t)));
  return Model::data_magnitude(mesh) + h_l1;
}

ThermistorModel thermistor_coefficients(const ThermistorParams& params) {
  return ThermistorModel(params);
}

}  // namespace ee
