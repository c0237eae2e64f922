#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "ee/mesh.hpp"

namespace ee {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Nodal P1 function on a mesh. Holds a non-owning pointer; the mesh must
/// outlive the field.
class Field {
 public:
  Field() = default;
  explicit Field(const Mesh& mesh) : mesh_(&mesh), values_(Eigen::VectorXd::Zero(mesh.node_count())) {}
  Field(const Mesh& mesh, Eigen::VectorXd values);

  const Mesh& mesh() const { return *mesh_; }
  const Eigen::VectorXd& values() const { return values_; }
  Eigen::VectorXd& values() { return values_; }
  double operator[](int i) const { return values_[i]; }
  int size() const { return static_cast<int>(values_.size()); }

  /// Element-constant gradient on triangle t.
  Eigen::Vector2d gradient(int t) const;
  /// Mean of the three vertex values of triangle t.
  double centroid_value(int t) const;

 private:
  const Mesh* mesh_ = nullptr;
  Eigen::VectorXd values_;
};

/// Nodal interpolant of a function.
template <typename Fn>
Field interpolate(const Mesh& mesh, Fn&& f) {
  Eigen::VectorXd v(mesh.node_count());
  for (int i = 0; i < mesh.node_count(); ++i) v[i] = f(mesh.node(i));
  return Field(mesh, std::move(v));
}

/// Frozen-coefficient scalar problem
///   -div(a grad v + b) + B = f   in the domain,
///   v = g on Dirichlet nodes, homogeneous conormal condition elsewhere.
/// All coefficients are element-constant; B is a lagged source.
struct ScalarProblem {
  Eigen::VectorXd diffusivity;                    ///< a, one per triangle, > 0
  Eigen::Matrix2Xd drift;                         ///< b, one column per triangle
  Eigen::VectorXd reaction;                       ///< B, one per triangle
  Eigen::VectorXd source;                         ///< f, one per triangle
  Eigen::VectorXd dirichlet_values;               ///< g, one per node (read on S)

  /// Unit diffusivity, no drift, no reaction, no source, zero Dirichlet data.
  static ScalarProblem laplace(const Mesh& mesh);
};

/// Assembled system. The full stiffness and load are kept for residual
/// evaluation; the reduced system acts on the free (non-Dirichlet) nodes.
struct SparseSystem {
  SparseMatrix stiffness;           ///< K_ij = sum_T a_T |T| grad phi_i . grad phi_j
  Eigen::VectorXd load;             ///< F_j = int (f - B) phi_j - int b . grad phi_j
  Eigen::VectorXd dirichlet_values; ///< full nodal vector; meaningful on S
  std::vector<int> free_nodes;
  std::vector<int> free_index;      ///< node -> position in free_nodes or -1
  SparseMatrix reduced;
  Eigen::VectorXd rhs;
  bool symmetric = true;
};

/// Local P1 stiffness of a triangle with diffusivity a.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> local_stiffness(const Eigen::Matrix<Scalar, 2, 1>& p0,
                                            const Eigen::Matrix<Scalar, 2, 1>& p1,
                                            const Eigen::Matrix<Scalar, 2, 1>& p2, Scalar a) {
  const Eigen::Matrix<Scalar, 2, 3> g = p1_gradients<Scalar>(p0, p1, p2);
  return a * signed_area(p0, p1, p2) * g.transpose() * g;
}

/// Throws CoefficientError when a diffusivity is not strictly positive.
SparseSystem assemble(const Mesh& mesh, const ScalarProblem& problem);

struct LinearSolution {
  Field field;
  int iterations = 0;
  double residual = 0.0;  ///< relative residual of the reduced system
};

/// Conjugate gradients (symmetric systems) or BiCGSTAB, Jacobi-preconditioned.
/// Throws SolverFailure when the relative residual is not reached within
/// 10 * n_free iterations.
LinearSolution solve_linear(const Mesh& mesh, const SparseSystem& system, double tol = 1e-12);

/// Weak-form residual vector K v - F on all nodes.
Eigen::VectorXd residual_vector(const SparseSystem& system, const Eigen::VectorXd& v);

/// Scale of each residual entry: (|K| |v|)_j + |F_j|.
Eigen::VectorXd residual_scale(const SparseSystem& system, const Eigen::VectorXd& v);

/// max_j |R_j| / max_j scale_j over free nodes; 0 for a vanishing system.
double relative_residual(const SparseSystem& system, const Eigen::VectorXd& v);

/// (int |f|^p)^(1/p) with the three-point edge-midpoint rule per triangle.
double lp_norm(const Field& f, double p = 2.0);
inline double l2_norm(const Field& f) { return lp_norm(f, 2.0); }

/// (int |grad f|^2)^(1/2); exact for P1.
double h1_seminorm(const Field& f);

/// Integral of f with the edge-midpoint rule.
double integral(const Field& f);

/// ||f - g||_{L^2} with g evaluated at edge midpoints.
double l2_error(const Field& f, const std::function<double(const Point&)>& g);

/// ||grad f - grad g||_{L^2} by the interior three-point rule; grad g by
/// central differences.
double h1_error(const Field& f, const std::function<double(const Point&)>& g);

/// T_L(s) = sign(s) min(|s|, L).
inline double truncate(double s, double level) {
  return s > level ? level : (s < -level ? -level : s);
}

/// Nodal truncation T_L(u - uS).
Field truncation_test(const Field& u, const Field& u_boundary, double level);

}  // namespace ee
