#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ee/iteration.hpp"

namespace ee {

struct ThresholdCell {
  double voltage = 0.0;
  double temperature = 0.0;     ///< inf of T^S over the Dirichlet set
  double min_u = 0.0;
  Status status = Status::Diverged;
  int iterations = 0;
  std::string message;
};

struct ThresholdMap {
  std::vector<double> voltages;      ///< increasing, columns
  std::vector<double> temperatures;  ///< increasing, rows
  std::vector<ThresholdCell> cells;  ///< row-major: cells[row * voltages.size() + col]
  double floor_fraction = 0.5;       ///< t0 = floor_fraction * temperature
  /// Per row: largest voltage V such that every grid voltage <= V converged
  /// with min u >= t0; NaN when even the first column fails.
  std::vector<double> frontier;
  bool frontier_exists = false;      ///< every row has a frontier
  bool frontier_monotone = false;    ///< frontier non-decreasing in temperature
  bool min_u_monotone = false;       ///< per column, converged min u non-decreasing in temperature
  double zero_voltage_error = 0.0;   ///< max |min u - temperature| over zero-voltage cells
  std::vector<std::string> violations;

  const ThresholdCell& cell(int row, int col) const { return cells[row * voltages.size() + col]; }
};

using ThresholdCellFactory = std::function<NernstPlanckParams(double voltage, double temperature)>;

/// One solve per grid cell (in parallel over cells). Failed cells are
/// recorded, never thrown.
ThresholdMap temperature_floor_probe(const Mesh& mesh, const ThresholdCellFactory& factory,
                                     const std::vector<double>& voltages,
                                     const std::vector<double>& temperatures,
                                     const SolverOptions& options = {},
                                     double floor_fraction = 0.5);

/// One cation with constant diffusivity between a left and a right
/// electrode: phi^S = V x,
/// rho^S = 0 on the left and -drop on the right, T^S = temperature. The
/// concentration drop drives a diffusion flux against the field, so small
/// voltages cool the interior.
NernstPlanckParams cooling_cell(double voltage, double temperature, double drop = 2.0,
                                double diffusivity = 10.0);

}  // namespace ee
