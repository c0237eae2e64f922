#pragma once

#include "ee/models.hpp"

namespace ee {

/// Unit square with Dirichlet electrodes at x = 0 and x = 1.
Mesh electrode_square(int n);

/// Thermistor with bounded nonlinear sigma and kappa, phi^S = 0.2 s x,
/// T^S = 0 and heat source 0.5 s.
ThermistorParams small_data_thermistor(double scale = 1.0);

/// Two species of charge +1 and -1, phi^S = 0.1 s x, rho^S = 0, T^S = 1.
NernstPlanckParams small_data_nernst_planck(double scale = 1.0);

}  // namespace ee
