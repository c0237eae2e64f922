#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ee/fem.hpp"

namespace ee {

/// State w = (rho_1, ..., rho_N, u) at a point.
using State = Eigen::VectorXd;
/// Gradients of w at a point, row i holds grad w_i.
using Gradients = Eigen::Matrix<double, Eigen::Dynamic, 2>;

/// Data of the coupled system
///   -div(a_i(x,w) grad rho_i + b_i) + B_i = 0,        i = 1..N
///   -div(a_{N+1}(x,w) grad u + b_{N+1}) + B_{N+1} = Pi(x, w, grad w)
/// Equations are indexed from 0; the energy equation is `energy_index()` and
/// the potential equation, solved first in the fixed-point sweep, is
/// `potential_index()`.
class CoefficientSet {
 public:
  virtual ~CoefficientSet() = default;

  /// N, the number of transport unknowns.
  virtual int transport_count() const = 0;
  int component_count() const { return transport_count() + 1; }
  int energy_index() const { return transport_count(); }
  int potential_index() const { return transport_count() - 1; }

  virtual std::string component_name(int i) const = 0;

  /// Leading coefficient a_i(x, w) > 0.
  virtual double leading(int eq, const Point& x, const State& w) const = 0;
  /// Lower-order flux b_i(x, w, grad w).
  virtual Eigen::Vector2d drift(int eq, const Point& x, const State& w, const Gradients& z) const;
  /// Lower-order term B_i(x, w), treated as a lagged source.
  virtual double lower_order(int eq, const Point& x, const State& w) const;
  /// Source Pi of the energy equation.
  virtual double dissipation(const Point& x, const State& w, const Gradients& z) const = 0;

  /// Whether w lies in the open state set; default accepts everything.
  virtual bool admissible(const State& w) const;
  /// Throws StateError when w is not admissible.
  void require_admissible(const State& w, int node = -1) const;
  /// Whether the energy variable is constrained to stay positive.
  virtual bool positive_energy() const { return false; }
};

/// Centroid states and element gradients of a tuple of fields.
struct ElementStates {
  Eigen::MatrixXd values;                   ///< component x triangle
  std::vector<Eigen::Matrix2Xd> gradients;  ///< per component, 2 x triangle

  State state(int t) const { return values.col(t); }
  Gradients grads(int t) const;
};

ElementStates element_states(const std::vector<Field>& fields);

/// Throws StateError naming the first node whose state is not admissible.
void check_nodal_states(const CoefficientSet& coeffs, const std::vector<Field>& fields);

/// Scalar problem for one equation with every coefficient evaluated from the
/// given element states. The energy equation receives Pi as its source.
ScalarProblem frozen_problem(const CoefficientSet& coeffs, int equation, const Mesh& mesh,
                             const ElementStates& states, const Eigen::VectorXd& dirichlet_values);

/// Element-wise Pi; throws StateError naming a node if the fields leave the
/// admissible set.
Eigen::VectorXd dissipation_density(const CoefficientSet& coeffs, const std::vector<Field>& fields);

struct WeakResidual {
  double value = 0.0;  ///< int A.grad zeta + B zeta - [energy] Pi zeta
  double scale = 0.0;  ///< sum_j |zeta_j| ((|K||v|)_j + |F_j|)
  double relative() const { return scale > 0.0 ? std::abs(value) / scale : 0.0; }
};

/// Discrete weak-form residual of equation `equation` with coefficients
/// evaluated at the supplied fields, tested against `test`. Throws
/// ContractError if the test function does not vanish on Dirichlet nodes.
WeakResidual weak_residual(const std::vector<Field>& fields, const CoefficientSet& coeffs,
                           int equation, const Field& test);

/// Same without the Dirichlet check; used for identities whose test function
/// is an admissible difference (e.g. rho - rho^S).
WeakResidual weak_form_action(const std::vector<Field>& fields, const CoefficientSet& coeffs,
                              int equation, const Eigen::VectorXd& test);

/// max-norm relative residual of each equation at the supplied fields.
std::vector<double> equation_residuals(const std::vector<Field>& fields,
                                       const CoefficientSet& coeffs,
                                       const std::vector<Eigen::VectorXd>& dirichlet_values);

}  // namespace ee
