#include "ee/presets.hpp"

namespace ee {

Mesh electrode_square(int n) {
  return tag_boundary(build_rectangle(n, n, 1.0, 1.0), [](const Point& p) {
    return p.x() < 1e-12 || p.x() > 1.0 - 1e-12 ? BoundaryTag::Dirichlet : BoundaryTag::Neumann;
  });
}

ThermistorParams small_data_thermistor(double scale) {
  ThermistorParams p;
  p.sigma = ScalarFunction::tanh_bounded(1.5, 0.5, 1.0);
  p.kappa = ScalarFunction::tanh_bounded(1.0, 0.5, 1.0);
  p.phi_boundary = [scale](const Point& x) { return 0.2 * scale * x.x(); };
  p.heat_source = [scale](const Point&) { return 0.5 * scale; };
  return p;
}

NernstPlanckParams small_data_nernst_planck(double scale) {
  NernstPlanckParams p;
  for (double charge : {1.0, -1.0}) {
    Species s;
    s.charge = charge;
    p.species.push_back(s);
  }
  p.phi_boundary = [scale](const Point& x) { return 0.1 * scale * x.x(); };
  return p;
}

}  // namespace ee
