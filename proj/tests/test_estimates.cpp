#include <doctest.h>

#include <atomic>
#include <cmath>
#include <numbers>
#include <random>

#include "ee/errors.hpp"
#include "ee/estimates.hpp"
#include "ee/parallel.hpp"
#include "ee/presets.hpp"
#include "ee/threshold.hpp"

using namespace ee;

namespace {

Mesh all_dirichlet(const Mesh& m) {
  return tag_boundary(m, [](const Point&) { return BoundaryTag::Dirichlet; });
}

std::vector<std::pair<double, double>> power_samples(double c, double beta, double noise = 0.0) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<std::pair<double, double>> s;
  for (int k = 0; k < 7; ++k) {
    const double r = std::ldexp(1.0, -k);
    s.push_back({r, c * std::pow(r, beta) * (1 + noise * u(rng))});
  }
  return s;
}

}  // namespace

TEST_CASE("decay fit on exact power laws") {
  const DecayFit f = fit_decay_exponent(power_samples(3.0, 2.0), 0, 6);
  CHECK(f.beta == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.residual <= 1e-12);
  const DecayFit g = fit_decay_exponent(power_samples(1.0, 4.0 / 3.0, 0.01), 0, 6);
  CHECK(std::abs(g.beta - 4.0 / 3.0) <= 0.05);
  CHECK_THROWS_AS(fit_decay_exponent(power_samples(1, 1), 0, 1), FitError);
  auto zero = power_samples(1, 1);
  zero[3].second = 0.0;
  CHECK_THROWS_AS(fit_decay_exponent(zero, 0, 6), FitError);
}

TEST_CASE("decay report window and monotonicity") {
  CHECK(default_fit_window(7) == std::pair{1, 4});
  std::vector<double> r, q;
  for (const auto& [a, b] : power_samples(2.0, 1.5)) {
    r.push_back(a);
    q.push_back(b);
  }
  const DecayReport rep = make_decay_report(Point(0.5, 0.5), r, q);
  CHECK(rep.fitted);
  CHECK(rep.window_begin == 1);
  CHECK(rep.window_end == 4);
  CHECK(rep.beta == doctest::Approx(1.5));
  std::swap(q[2], q[3]);
  CHECK_THROWS_AS(make_decay_report(Point(0.5, 0.5), r, q), ContractError);
}

TEST_CASE("Morrey seminorm") {
  const Mesh mesh = build_rectangle(32, 32, 1, 1);
  const auto radii = dyadic_radii(mesh);
  const Field zero(mesh);
  CHECK(morrey_seminorm(zero, 2, 2, {Point(0.5, 0.5)}, radii) == 0.0);
  const Field one = interpolate(mesh, [](const Point&) { return 1.0; });
  CHECK(std::abs(morrey_seminorm(one, 2, 2, {Point(0.5, 0.5)}, radii) - std::numbers::pi) <= 1e-2);
  const Field f = interpolate(mesh, [](const Point& x) { return std::sin(4 * x.x()) + x.y(); });
  const Field g(mesh, -3.0 * f.values());
  const std::vector<Point> centers{Point(0.5, 0.5), Point(0, 0), Point(0.25, 0.75)};
  const double mf = morrey_seminorm(f, 1.5, 1.0, centers, radii);
  CHECK(morrey_seminorm(g, 1.5, 1.0, centers, radii) == doctest::Approx(std::pow(3.0, 1.5) * mf).epsilon(1e-12));
  CHECK_THROWS_AS(morrey_seminorm(f, 2, 2, {}, radii), ContractError);
  CHECK_THROWS_AS(morrey_seminorm(f, 2, 2, centers, {}), ContractError);
}

TEST_CASE("gradient energy decay") {
  const Mesh mesh = build_rectangle(32, 32, 1, 1);
  const auto radii = dyadic_radii(mesh);
  const Field x = interpolate(mesh, [](const Point& p) { return p.x(); });
  CHECK(std::abs(gradient_energy_decay(x, Point(0.5, 0.5), radii).beta - 2.0) <= 0.05);
  const Field f = interpolate(mesh, [](const Point& p) { return std::exp(p.x()) * std::cos(p.y()); });
  const double b = gradient_energy_decay(f, Point(0.3, 0.6), radii).beta;
  const Field g(mesh, (-2.0 * f.values()).array() + 5.0);
  CHECK(gradient_energy_decay(g, Point(0.3, 0.6), radii).beta == doctest::Approx(b).epsilon(1e-10));
  const Field c = interpolate(mesh, [](const Point&) { return 4.0; });
  CHECK_THROWS_AS(gradient_energy_decay(c, Point(0.5, 0.5), radii), FitError);
}

TEST_CASE("reentrant corner exponent") {
  const Mesh mesh = all_dirichlet(build_lshape(32));
  const auto g = [](const Point& p) {
    const Point d = p - Point(1, 1);
    double theta = std::atan2(d.y(), d.x()) - std::numbers::pi / 2;
    if (theta < 0) theta += 2 * std::numbers::pi;
    return std::pow(d.norm(), 2.0 / 3.0) * std::sin(2.0 * theta / 3.0);
  };
  ScalarProblem p = ScalarProblem::laplace(mesh);
  p.dirichlet_values = interpolate(mesh, g).values();
  const Field u = solve_linear(mesh, assemble(mesh, p)).field;
  CHECK(std::abs(gradient_energy_decay(u, Point(1, 1), dyadic_radii(mesh)).beta - 4.0 / 3.0) <= 0.1);
}

TEST_CASE("oscillation exponents") {
  const Mesh mesh = build_rectangle(64, 64, 1, 1);
  const auto radii = dyadic_radii(mesh);
  const Point c(0.5, 0.5);
  const Field root = interpolate(mesh, [c](const Point& x) { return std::sqrt((x - c).norm()); });
  CHECK(std::abs(oscillation_hoelder(root, {c}, radii).front().beta - 0.5) <= 0.05);
  const Field affine = interpolate(mesh, [](const Point& x) { return 3 * x.x() + x.y(); });
  CHECK(std::abs(oscillation_hoelder(affine, {c}, radii).front().beta - 1.0) <= 0.05);
  const Field flat = interpolate(mesh, [](const Point&) { return 2.0; });
  const DecayReport r = oscillation_hoelder(flat, {c}, radii).front();
  CHECK(r.beta == 1.0);
  CHECK_FALSE(r.notice.empty());
  // A ramp of width h at the center: the oscillation saturates.
  const double h = 1.0 / 64;
  const Field ramp = interpolate(mesh, [&](const Point& x) { return std::clamp((x.x() - 0.5) / h, -1.0, 1.0); });
  const double steep = oscillation_hoelder(ramp, {c}, radii).front().beta;
  const Field wide = interpolate(mesh, [&](const Point& x) { return std::clamp((x.x() - 0.5) / 0.5, -1.0, 1.0); });
  CHECK(steep < 0.25);
  CHECK(steep < oscillation_hoelder(wide, {c}, radii).front().beta);
}

TEST_CASE("dissipation decay") {
  const Mesh mesh = electrode_square(32);
  ThermistorParams p;
  p.phi_boundary = [](const Point& x) { return x.x(); };
  const ThermistorModel m(p);
  const std::vector<Field> w{interpolate(mesh, [](const Point& x) { return x.x(); }), Field(mesh)};
  for (const DecayReport& r : dissipation_decay(m, w, {Point(0.5, 0.5), Point(0.3, 0.4)}, dyadic_radii(mesh)))
    CHECK(std::abs(r.beta - 2.0) <= 0.05);

  const ThermistorModel flat{ThermistorParams{}};
  const std::vector<Field> zero{Field(mesh), Field(mesh)};
  const DecayReport r = dissipation_decay(flat, zero, {Point(0.5, 0.5)}, dyadic_radii(mesh)).front();
  CHECK_FALSE(r.fitted);
  CHECK_FALSE(r.notice.empty());
}

TEST_CASE("default centers") {
  const Mesh mesh = tag_boundary(build_lshape(4), [](const Point& x) {
    return x.x() < 1e-12 ? BoundaryTag::Dirichlet : BoundaryTag::Neumann;
  });
  const auto c = default_centers(mesh);
  for (const Point& p : c) CHECK(mesh.contains(p));
  // Two corner nodes plus the interior points that fall inside the L.
  CHECK(c.size() >= 2 + 4);
}

TEST_CASE("bounds report") {
  const Mesh mesh = electrode_square(8);
  const ThermistorModel m{ThermistorParams{}};
  const std::vector<Field> zero{Field(mesh), Field(mesh)};
  for (const auto& c : linf_bounds(m, zero, m.boundary_values(mesh)).components) CHECK(c.margin == 0.0);
  std::vector<Field> w = zero;
  w[1].values()[mesh.node_count() / 2] = 0.2;
  const BoundsReport b = linf_bounds(m, w, m.boundary_values(mesh));
  CHECK(b.components[1].name == "u");
  CHECK(b.components[1].max == 0.2);
  CHECK(b.components[1].margin == doctest::Approx(0.2));
}

TEST_CASE("gradient norms") {
  const Mesh mesh = build_rectangle(8, 8, 1, 1);
  const Field x = interpolate(mesh, [](const Point& p) { return p.x(); });
  const auto norms = lp_gradient_norms({x}, {1, 2, 3.5, 8});
  for (double v : norms.front()) CHECK(v == doctest::Approx(1.0).epsilon(1e-13));
  const Field f = interpolate(mesh, [](const Point& p) { return p.x() * p.x() - p.y(); });
  CHECK(lp_gradient_norms({f}, {2}).front().front() == doctest::Approx(h1_seminorm(f)).epsilon(1e-13));
  CHECK_THROWS_AS(lp_gradient_norms({f}, {0.5}), ContractError);
}

TEST_CASE("uniqueness probe") {
  const Mesh mesh = electrode_square(8);
  const ThermistorModel zero{ThermistorParams{}};
  const BoundaryData g = zero.boundary_values(mesh);
  const SolverOptions options;
  const UniquenessProbe p =
      uniqueness_probe(zero, mesh, options, harmonic_initial_guess(mesh, g), random_initial_guess(zero, mesh, g, 1.0, 3));
  CHECK(p.verdict == Verdict::UniqueAtTol);
  CHECK(p.threshold == doctest::Approx(100 * options.tol));
  CHECK(to_string(p.verdict) == "UNIQUE_AT_TOL");

  SolverOptions tight = options;
  tight.max_iter = 1;
  const ThermistorModel small(small_data_thermistor());
  const BoundaryData gs = small.boundary_values(mesh);
  const UniquenessProbe q = uniqueness_probe(small, mesh, tight, random_initial_guess(small, mesh, gs, 0.5, 1),
                                             random_initial_guess(small, mesh, gs, 0.5, 2));
  CHECK(q.verdict == Verdict::Inconclusive);
}

TEST_CASE("energy identities on a converged run") {
  const Mesh mesh = electrode_square(16);
  for (double scale : {1.0, 3.0}) {
    const NernstPlanckModel m(small_data_nernst_planck(scale));
    const BoundaryData g = m.boundary_values(mesh);
    const SolverOptions options;
    const SystemSolution s = solve_system(m, mesh, g, options);
    REQUIRE(s.report.status == Status::Converged);
    const auto ext = harmonic_initial_guess(mesh, g);
    for (int i = 0; i < m.component_count(); ++i)
      CHECK(galerkin_identity(m, s.fields, ext[i], i).relative() <= options.res_tol);
    const auto checks = truncation_checks(m, s.fields, ext[m.energy_index()]);
    CHECK(checks.size() == 6);
    for (const auto& c : checks) CHECK(c.residual.value <= options.res_tol * c.residual.scale);
  }
}

TEST_CASE("threshold probe on a small grid") {
  const ThresholdMap map = temperature_floor_probe(
      electrode_square(8), [](double v, double t) { return cooling_cell(v, t); }, {0.0, 1.0, 8.0}, {0.25, 1.0, 4.0});
  REQUIRE(map.cells.size() == 9);
  CHECK(map.zero_voltage_error <= 1e-10);
  for (int row = 0; row < 3; ++row) CHECK(map.cell(row, 0).status == Status::Converged);
  CHECK(map.frontier_exists);
  CHECK(map.frontier_monotone);
  for (std::size_t k = 1; k < map.frontier.size(); ++k) CHECK(map.frontier[k] >= map.frontier[k - 1]);
}

TEST_CASE("parallel_for runs every index once and rethrows") {
  std::vector<std::atomic<int>> hits(100);
  parallel_for(100, [&](int i) { ++hits[i]; });
  for (const auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_AS(parallel_for(10, [](int i) {
                    if (i == 3) throw FitError("boom");
                  }),
                  FitError);
  CHECK(thread_count() >= 1);
}
