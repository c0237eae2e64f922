#include "ee/threshold.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ee/errors.hpp"
#include "ee/parallel.hpp"

namespace ee {

NernstPlanckParams cooling_cell(double voltage, double temperature, double drop,
                                double diffusivity) {
  NernstPlanckParams p;
  Species s;
  s.charge = 1.0;
  s.diffusivity = ScalarFunction::constant(diffusivity);
  s.boundary = [drop](const Point& x) { return -drop * x.x(); };
  p.species.push_back(s);
  p.phi_boundary = [voltage](const Point& x) { return voltage * x.x(); };
  p.temperature_boundary = [temperature](const Point&) { return temperature; };
  return p;
}

ThresholdMap temperature_floor_probe(const Mesh& mesh, const ThresholdCellFactory& factory,
                                     const std::vector<double>& voltages,
                                     const std::vector<double>& temperatures,
                                     const SolverOptions& options, double floor_fraction) {
  if (voltages.empty() || temperatures.empty())
    throw ContractError("threshold probe needs a nonempty grid");
  ThresholdMap map;
  map.voltages = voltages;
  map.temperatures = temperatures;
  map.floor_fraction = floor_fraction;
  const int nv = static_cast<int>(voltages.size());
  const int nt = static_cast<int>(temperatures.size());
  map.cells.resize(static_cast<std::size_t>(nv * nt));

  parallel_for(nv * nt, [&](int k) {
    ThresholdCell& cell = map.cells[k];
    cell.voltage = voltages[k % nv];
    try {
      const NernstPlanckModel model(factory(cell.voltage, temperatures[k / nv]));
      const BoundaryData boundary = model.boundary_values(mesh);
      const int e = model.energy_index();
      cell.temperature = std::numeric_limits<double>::infinity();
      for (int node : mesh.dirichlet_nodes())
        cell.temperature = std::min(cell.temperature, boundary[e][node]);
      const SystemSolution sol = solve_system(model, mesh, boundary, options);
      cell.status = sol.report.status;
      cell.iterations = sol.report.iterations;
      cell.min_u = sol.report.min_u;
      cell.message = sol.report.message;
    } catch (const Error& err) {
      cell.status = Status::Diverged;
      cell.message = err.what();
    }
  });

  const auto ok = [&](const ThresholdCell& c) {
    return c.status == Status::Converged && c.min_u >= floor_fraction * c.temperature;
  };
  map.frontier_exists = true;
  for (int r = 0; r < nt; ++r) {
    double f = std::numeric_limits<double>::quiet_NaN();
    for (int c = 0; c < nv && ok(map.cell(r, c)); ++c) f = voltages[c];
    if (std::isnan(f)) map.frontier_exists = false;
    map.frontier.push_back(f);
  }

  map.frontier_monotone = map.frontier_exists;
  for (int r = 1; r < nt && map.frontier_exists; ++r) {
    if (map.frontier[r] < map.frontier[r - 1]) {
      map.frontier_monotone = false;
      std::ostringstream os;
      os << "frontier drops from " << map.frontier[r - 1] << " to " << map.frontier[r]
         << " at temperature " << temperatures[r];
      map.violations.push_back(os.str());
    }
  }

  map.min_u_monotone = true;
  for (int c = 0; c < nv; ++c) {
    for (int r = 1; r < nt; ++r) {
      const ThresholdCell& lo = map.cell(r - 1, c);
      const ThresholdCell& hi = map.cell(r, c);
      if (lo.status != Status::Converged || hi.status != Status::Converged) continue;
      if (hi.min_u < lo.min_u - 1e-10 * std::max(1.0, std::abs(lo.min_u))) {
        map.min_u_monotone = false;
        std::ostringstream os;
        os << "min u decreases from " << lo.min_u << " to " << hi.min_u << " at voltage "
           << voltages[c] << ", temperature " << temperatures[r];
        map.violations.push_back(os.str());
      }
    }
  }

  for (int c = 0; c < nv; ++c) {
    if (voltages[c] != 0.0) continue;
    for (int r = 0; r < nt; ++r) {
      const ThresholdCell& cell = map.cell(r, c);
      const double err = cell.status == Status::Converged
                             ? std::abs(cell.min_u - cell.temperature)
                             : std::numeric_limits<double>::infinity();
      map.zero_voltage_error = std::max(map.zero_voltage_error, err);
    }
  }
  return map;
}

}  // namespace ee
