#include <doctest.h>

#include <cmath>
#include <random>

#include "ee/certificate.hpp"
#include "ee/errors.hpp"
#include "ee/iteration.hpp"
#include "ee/kirchhoff.hpp"
#include "ee/presets.hpp"

using namespace ee;

TEST_CASE("registry functions") {
  CHECK(ScalarFunction::constant(3)(7.0) == 3.0);
  CHECK(ScalarFunction::affine(1, 2)(0.5) == 2.0);
  const auto t = ScalarFunction::tanh_bounded(1.5, 0.5);
  CHECK(t(0.0) == 1.5);
  CHECK(t(1.0) == doctest::Approx(1.5 + 0.5 * std::tanh(1.0)));
  CHECK(ScalarFunction::exp_mobility(2, -1)(1.0) == doctest::Approx(2 * std::exp(-1.0)));
  const auto [lo, hi] = t.range(-3, 3);
  CHECK(lo == doctest::Approx(1.5 - 0.5 * std::tanh(3.0)));
  CHECK(hi == doctest::Approx(1.5 + 0.5 * std::tanh(3.0)));
  CHECK(ScalarFunction::from_registry("affine", {{"c0", 1}, {"c1", 4}})(1.0) == 5.0);
  CHECK_THROWS_AS(ScalarFunction::from_registry("cubic", {}), ConfigError);
  CHECK_THROWS_AS(ScalarFunction::from_registry("constant", {{"value", 1}, {"slope", 2}}), ConfigError);
}

TEST_CASE("closed-form primitives match quadrature") {
  for (const auto& f : {ScalarFunction::affine(1, 1), ScalarFunction::tanh_bounded(1, 0.5, 2, 0.3),
                        ScalarFunction::exp_mobility(0.5, 0.7), ScalarFunction::constant(2)}) {
    for (double s : {-2.0, -0.3, 0.0, 0.9, 3.0}) {
      // Composite Simpson with 2000 panels as the reference.
      const int n = 2000;
      const double h = s / n;
      double sum = f(0) + f(s);
      for (int k = 1; k < n; ++k) sum += (k % 2 ? 4 : 2) * f(k * h);
      CHECK(f.integral(s) == doctest::Approx(sum * h / 3).epsilon(1e-10));
    }
  }
}

TEST_CASE("Kirchhoff transform") {
  const Conductivity one = [](double) { return 1.0; };
  const Conductivity two = [](double) { return 2.0; };
  const Conductivity lin = [](double t) { return 1.0 + t; };
  CHECK(kirchhoff(one, 0.7) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(kirchhoff(two, 3.0) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(std::abs(kirchhoff_inverse(lin, 1.5) - 1.0) <= 1e-12);
  for (double T = 0.0; T <= 10.0; T += 0.5) {
    CHECK(std::abs(kirchhoff(lin, T) - (T + T * T / 2)) <= 1e-12 * (1 + T * T));
    CHECK(std::abs(kirchhoff_inverse(lin, kirchhoff(lin, T)) - T) <= 1e-12 * (1 + T));
  }
  CHECK_THROWS_AS(kirchhoff([](double t) { return t; }, 1.0), ModelError);
}

TEST_CASE("Kirchhoff roundtrip on random temperatures") {
  ThermistorParams p;
  p.kappa = ScalarFunction::tanh_bounded(1, 0.5, 1, 0);
  const ThermistorModel m(p);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-5, 5);
  for (int k = 0; k < 100; ++k) {
    const double T = d(rng);
    CHECK(std::abs(m.temperature(m.kirchhoff(T)) - T) <= 1e-10);
  }
}

TEST_CASE("thermistor with non-positive kappa is rejected") {
  ThermistorParams p;
  p.kappa = ScalarFunction::affine(1, 0.5);  // negative below T = -2
  CHECK_THROWS_AS(thermistor_coefficients(p), ModelError);
}

TEST_CASE("thermistor coefficient set") {
  ThermistorParams p;
  p.sigma = ScalarFunction::constant(2.0);
  p.heat_source = [](const Point&) { return 3.0; };
  const ThermistorModel m(p);
  CHECK(m.component_count() == 2);
  CHECK(m.potential_index() == 0);
  CHECK(m.energy_index() == 1);
  const State w = Eigen::Vector2d(0.1, 0.4);
  CHECK(m.leading(0, Point::Zero(), w) == 2.0);
  CHECK(m.leading(1, Point::Zero(), w) == 1.0);
  CHECK(m.lower_order(1, Point::Zero(), w) == -3.0);
  CHECK(m.drift(0, Point::Zero(), w, Gradients::Ones(2, 2)).isZero());
  Gradients z(2, 2);
  z << 3, 4, 1, 1;
  CHECK(m.dissipation(Point::Zero(), w, z) == 50.0);
}

TEST_CASE("dissipation density of a linear potential") {
  const Mesh mesh = electrode_square(6);
  for (double s : {1.0, 2.0}) {
    ThermistorParams p;
    p.sigma = ScalarFunction::constant(s);
    const ThermistorModel m(p);
    const std::vector<Field> w{interpolate(mesh, [](const Point& x) { return x.x(); }), Field(mesh)};
    const Eigen::VectorXd pi = dissipation_density(m, w);
    CHECK((pi.array() - s).abs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("thermistor dissipation is nonnegative") {
  const ThermistorModel m(small_data_thermistor());
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int k = 0; k < 200; ++k) {
    Gradients z(2, 2);
    z << g(rng), g(rng), g(rng), g(rng);
    CHECK(m.dissipation(Point::Zero(), Eigen::Vector2d(g(rng), g(rng)), z) >= 0.0);
  }
}

TEST_CASE("Nernst-Planck coefficient set") {
  NernstPlanckParams p;
  Species s;
  s.charge = 2.0;
  s.diffusivity = ScalarFunction::constant(3.0);
  p.species = {s};
  p.permittivity = ScalarFunction::constant(5.0);
  p.kappa = ScalarFunction::constant(7.0);
  const NernstPlanckModel m(p);
  CHECK(m.component_count() == 3);
  CHECK(m.component_name(0) == "rho1");
  CHECK(m.component_name(1) == "phi");
  CHECK(m.component_name(2) == "u");
  const State w = Eigen::Vector3d(0.5, 0.0, 2.0);
  CHECK(m.leading(0, Point::Zero(), w) == doctest::Approx(3 * std::exp(0.5)));
  CHECK(m.leading(1, Point::Zero(), w) == 5.0);
  CHECK(m.leading(2, Point::Zero(), w) == 7.0);
  Gradients z = Gradients::Zero(3, 2);
  z.row(0) << 0.2, 0.0;
  z.row(1) << 1.0, 0.0;
  // b = m (v/u) grad phi, Pi = v m (grad rho + (v/u) grad phi) . grad phi
  const double mob = 3 * std::exp(0.5);
  CHECK(m.drift(0, Point::Zero(), w, z).x() == doctest::Approx(mob * 1.0));
  CHECK(m.dissipation(Point::Zero(), w, z) == doctest::Approx(2 * mob * (0.2 + 1.0)));
  CHECK_THROWS_AS(m.leading(0, Point::Zero(), Eigen::Vector3d(0, 0, 0.0)), StateError);
  CHECK_THROWS_AS(m.leading(0, Point::Zero(), Eigen::Vector3d(0, 0, 1e-9)), StateError);
}

TEST_CASE("state violations name the node") {
  const Mesh mesh = electrode_square(4);
  const NernstPlanckModel m(small_data_nernst_planck());
  std::vector<Field> w(4, Field(mesh));
  w[3].values().setOnes();
  w[3].values()[7] = -1.0;
  try {
    dissipation_density(m, w);
    FAIL("expected a state error");
  } catch (const StateError& e) {
    CHECK(e.node() == 7);
    CHECK(e.value() == -1.0);
  }
}

TEST_CASE("gradient-free Nernst-Planck data give constant fields") {
  const Mesh mesh = electrode_square(6);
  NernstPlanckParams p = small_data_nernst_planck(0.0);
  p.species[0].boundary = [](const Point&) { return 0.3; };
  const NernstPlanckModel m(p);
  const SystemSolution s = solve_system(m, mesh, m.boundary_values(mesh));
  REQUIRE(s.report.status == Status::Converged);
  CHECK((s.fields[0].values().array() - 0.3).abs().maxCoeff() <= 1e-12);
  CHECK((s.fields[3].values().array() - 1.0).abs().maxCoeff() <= 1e-12);
  CHECK(dissipation_density(m, s.fields).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("uncharged species decouples") {
  const Mesh mesh = electrode_square(8);
  NernstPlanckParams p;
  Species s;
  s.charge = 0.0;
  s.boundary = [](const Point& x) { return x.x(); };
  p.species = {s};
  p.phi_boundary = [](const Point& x) { return 2 * x.x(); };
  const NernstPlanckModel m(p);
  const SystemSolution sol = solve_system(m, mesh, m.boundary_values(mesh));
  REQUIRE(sol.report.status == Status::Converged);
  CHECK(dissipation_density(m, sol.fields).cwiseAbs().maxCoeff() == 0.0);
  // -div(e^rho grad rho) = -Laplace e^rho = 0, so e^rho is affine in x.
  for (int i = 0; i < mesh.node_count(); ++i) {
    const Point& x = mesh.node(i);
    CHECK(std::abs(std::exp(sol.fields[0][i]) - (1 + (std::exp(1.0) - 1) * x.x())) <= 1e-2);
  }
}

TEST_CASE("charge reversal negates the potential only") {
  const Mesh mesh = electrode_square(8);
  NernstPlanckParams p = small_data_nernst_planck(4.0);
  p.species[0].boundary = [](const Point& x) { return 0.2 * x.x(); };
  p.species[1].boundary = [](const Point& x) { return -0.1 * x.x(); };
  NernstPlanckParams q = p;
  for (auto& s : q.species) s.charge = -s.charge;
  const auto phi = p.phi_boundary;
  q.phi_boundary = [phi](const Point& x) { return -phi(x); };
  const NernstPlanckModel mp(p), mq(q);
  const SystemSolution a = solve_system(mp, mesh, mp.boundary_values(mesh));
  const SystemSolution b = solve_system(mq, mesh, mq.boundary_values(mesh));
  REQUIRE(a.report.status == Status::Converged);
  REQUIRE(b.report.status == Status::Converged);
  CHECK((a.fields[0].values() - b.fields[0].values()).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK((a.fields[1].values() - b.fields[1].values()).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK((a.fields[2].values() + b.fields[2].values()).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK((a.fields[3].values() - b.fields[3].values()).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("entropy production is pointwise nonnegative") {
  const Mesh mesh = electrode_square(8);
  const NernstPlanckModel m(small_data_nernst_planck(3.0));
  const SystemSolution s = solve_system(m, mesh, m.boundary_values(mesh));
  REQUIRE(s.report.status == Status::Converged);
  const EntropyBalance e = entropy_residual(m, s.fields);
  CHECK(e.min_local_production >= 0.0);
  CHECK(e.production > 0.0);
}

TEST_CASE("growth certificates") {
  SUBCASE("constant coefficients") {
    ThermistorParams p;
    p.sigma = ScalarFunction::constant(2.5);
    const auto c = certify_growth(ThermistorModel(p), {{-1, 1}, {0, 3}}, 1000);
    CHECK(c.nu[0] == 2.5);
    CHECK(c.mu[0] == 2.5);
    CHECK(c.nu[1] == 1.0);
    CHECK(c.omega[0] == doctest::Approx(2.5));
    CHECK(c.growth_ratio == doctest::Approx(1.0));
    CHECK(c.max_bound_usage <= 1.0);
  }
  SUBCASE("analytic tanh range") {
    ThermistorParams p;
    p.sigma = ScalarFunction::tanh_bounded(1.5, 0.5);
    const ThermistorModel m(p);
    const auto c = certify_growth(m, {{0, 1}, {-30, 30}});
    CHECK(std::abs(c.nu[0] - 1.0) <= 1e-9);
    CHECK(std::abs(c.mu[0] - 2.0) <= 1e-9);
  }
  SUBCASE("vanishing dissipation") {
    NernstPlanckParams p;
    Species s;
    s.charge = 0.0;
    p.species = {s};
    const auto c = certify_growth(NernstPlanckModel(p), {{-1, 1}, {-1, 1}, {0.5, 2}});
    for (double w : c.omega) CHECK(w == 0.0);
    CHECK(c.growth_ratio == 0.0);
  }
  SUBCASE("Nernst-Planck bound holds on random gradients") {
    const NernstPlanckModel m(small_data_nernst_planck());
    const auto c = certify_growth(m, {{-1, 1}, {-1, 1}, {-1, 1}, {0.5, 2}});
    for (double nu : c.nu) CHECK(nu > 0.0);
    CHECK(std::isfinite(c.growth_ratio));
    CHECK(c.max_bound_usage <= 1.0 + 1e-12);
  }
  SUBCASE("contract violations") {
    const NernstPlanckModel m(small_data_nernst_planck());
    CHECK_THROWS_AS(certify_growth(m, {{-1, 1}, {-1, 1}, {-1, 1}, {0.5, 2}}, 10), ContractError);
    CHECK_THROWS_AS(certify_growth(m, {{-1, 1}, {-1, 1}, {-1, 1}, {-1, 2}}), ContractError);
  }
}
