#include "ee/fem.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/IterativeLinearSolvers>

#include "ee/errors.hpp"

namespace ee {

Field::Field(const Mesh& mesh, Eigen::VectorXd values) : mesh_(&mesh), values_(std::move(values)) {
  if (values_.size() != mesh.node_count())
    throw ContractError("field length differs from node count");
}

Eigen::Vector2d Field::gradient(int t) const {
  const auto& tri = mesh_->triangle(t);
  const auto& g = mesh_->gradients(t);
  return g.col(0) * values_[tri[0]] + g.col(1) * values_[tri[1]] + g.col(2) * values_[tri[2]];
}

double Field::centroid_value(int t) const {
  const auto& tri = mesh_->triangle(t);
  return (values_[tri[0]] + values_[tri[1]] + values_[tri[2]]) / 3.0;
}

ScalarProblem ScalarProblem::laplace(const Mesh& mesh) {
  const int nt = mesh.triangle_count();
  return {Eigen::VectorXd::Ones(nt), Eigen::Matrix2Xd::Zero(2, nt), Eigen::VectorXd::Zero(nt),
          Eigen::VectorXd::Zero(nt), Eigen::VectorXd::Zero(mesh.node_count())};
}

SparseSystem assemble(const Mesh& mesh, const ScalarProblem& problem) {
  const int n = mesh.node_count();
  const int nt = mesh.triangle_count();
  if (problem.diffusivity.size() != nt || problem.drift.cols() != nt ||
      problem.reaction.size() != nt || problem.source.size() != nt ||
      problem.dirichlet_values.size() != n)
    throw ContractError("scalar problem data sizes do not match the mesh");

  SparseSystem sys;
  sys.load = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(9 * nt));
  for (int t = 0; t < nt; ++t) {
    const double a = problem.diffusivity[t];
    if (!(a > 0.0) || !std::isfinite(a))
      throw CoefficientError("non-positive diffusivity " + std::to_string(a) + " on triangle " +
                             std::to_string(t));
    const auto& tri = mesh.triangle(t);
    const auto& g = mesh.gradients(t);
    const double area = mesh.area(t);
    const Eigen::Matrix3d local = a * area * g.transpose() * g;
    const double nodal_source = (problem.source[t] - problem.reaction[t]) * area / 3.0;
    const Eigen::Vector3d drift_load = area * g.transpose() * problem.drift.col(t);
    for (int i = 0; i < 3; ++i) {
      sys.load[tri[i]] += nodal_source - drift_load[i];
      for (int j = 0; j < 3; ++j) triplets.emplace_back(tri[i], tri[j], local(i, j));
    }
  }
  sys.stiffness.resize(n, n);
  sys.stiffness.setFromTriplets(triplets.begin(), triplets.end());
  sys.dirichlet_values = problem.dirichlet_values;

  const auto& mask = mesh.dirichlet_mask();
  sys.free_index.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    if (!mask[i]) {
      sys.free_index[i] = static_cast<int>(sys.free_nodes.size());
      sys.free_nodes.push_back(i);
    }
  }
  const int nf = static_cast<int>(sys.free_nodes.size());
  sys.rhs.resize(nf);
  std::vector<Eigen::Triplet<double>> reduced;
  reduced.reserve(static_cast<std::size_t>(sys.stiffness.nonZeros()));
  for (int r = 0; r < nf; ++r) {
    const int row = sys.free_nodes[r];
    double rhs = sys.load[row];
    for (SparseMatrix::InnerIterator it(sys.stiffness, row); it; ++it) {
      const int c = sys.free_index[it.col()];
      if (c >= 0)
        reduced.emplace_back(r, c, it.value());
      else
        rhs -= it.value() * problem.dirichlet_values[it.col()];
    }
    sys.rhs[r] = rhs;
  }
  sys.reduced.resize(nf, nf);
  sys.reduced.setFromTriplets(reduced.begin(), reduced.end());
  return sys;
}

LinearSolution solve_linear(const Mesh& mesh, const SparseSystem& system, double tol) {
  const int nf = static_cast<int>(system.free_nodes.size());
  Eigen::VectorXd full = system.dirichlet_values;
  for (int i = 0; i < mesh.node_count(); ++i)
    if (system.free_index[i] >= 0) full[i] = 0.0;
  if (nf == 0) return {Field(mesh, std::move(full)), 0, 0.0};

  const int max_iter = 10 * nf;
  Eigen::VectorXd x;
  int iterations = 0;
  bool ok = false;
  if (system.symmetric) {
    Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setTolerance(tol);
    cg.setMaxIterations(max_iter);
    cg.compute(system.reduced);
    x = cg.solve(system.rhs);
    iterations = static_cast<int>(cg.iterations());
    ok = cg.info() == Eigen::Success;
  } else {
    Eigen::BiCGSTAB<SparseMatrix, Eigen::DiagonalPreconditioner<double>> bicg;
    bicg.setTolerance(tol);
    bicg.setMaxIterations(max_iter);
    bicg.compute(system.reduced);
    x = bicg.solve(system.rhs);
    iterations = static_cast<int>(bicg.iterations());
    ok = bicg.info() == Eigen::Success;
  }
  const double bnorm = system.rhs.norm();
  const double residual = bnorm > 0.0 ? (system.reduced * x - system.rhs).norm() / bnorm : 0.0;
  if (!ok || !x.allFinite())
    throw SolverFailure("linear solver did not converge (relative residual " +
                            std::to_string(residual) + ")",
                        residual, iterations);
  for (int r = 0; r < nf; ++r) full[system.free_nodes[r]] = x[r];
  return {Field(mesh, std::move(full)), iterations, residual};
}

Eigen::VectorXd residual_vector(const SparseSystem& system, const Eigen::VectorXd& v) {
  return system.stiffness * v - system.load;
}

Eigen::VectorXd residual_scale(const SparseSystem& system, const Eigen::VectorXd& v) {
  const SparseMatrix abs_k = system.stiffness.cwiseAbs();
  return abs_k * v.cwiseAbs() + system.load.cwiseAbs();
}

double relative_residual(const SparseSystem& system, const Eigen::VectorXd& v) {
  const Eigen::VectorXd r = residual_vector(system, v);
  const Eigen::VectorXd s = residual_scale(system, v);
  double rmax = 0.0, smax = 0.0;
  for (int node : system.free_nodes) {
    rmax = std::max(rmax, std::abs(r[node]));
    smax = std::max(smax, s[node]);
  }
  return smax > 0.0 ? rmax / smax : 0.0;
}

double lp_norm(const Field& f, double p) {
  if (!(p >= 1.0)) throw ContractError("lp_norm needs p >= 1");
  const Mesh& mesh = f.mesh();
  double sum = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& [a, b, c] = mesh.triangle(t);
    const double mab = 0.5 * (f[a] + f[b]), mbc = 0.5 * (f[b] + f[c]), mca = 0.5 * (f[c] + f[a]);
    sum += mesh.area(t) / 3.0 *
           (std::pow(std::abs(mab), p) + std::pow(std::abs(mbc), p) + std::pow(std::abs(mca), p));
  }
  return std::pow(sum, 1.0 / p);
}

double l2_error(const Field& f, const std::function<double(const Point&)>& g) {
  const Mesh& mesh = f.mesh();
  double sum = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangle(t);
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k], b = tri[(k + 1) % 3];
      const double d = 0.5 * (f[a] + f[b]) - g(0.5 * (mesh.node(a) + mesh.node(b)));
      sum += mesh.area(t) / 3.0 * d * d;
    }
  }
  return std::sqrt(sum);
}

double h1_error(const Field& f, const std::function<double(const Point&)>& g) {
  const Mesh& mesh = f.mesh();
  double sum = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& [a, b, c] = mesh.triangle(t);
    const Eigen::Vector2d grad = f.gradient(t);
    const Point pa = mesh.node(a), pb = mesh.node(b), pc = mesh.node(c);
    // Interior points keep the difference stencil off the element edges.
    for (const Point& x : {Point((4 * pa + pb + pc) / 6), Point((pa + 4 * pb + pc) / 6),
                           Point((pa + pb + 4 * pc) / 6)}) {
      const double step = 1e-7 * std::max(1.0, x.norm());
      const Eigen::Vector2d exact((g(x + Point(step, 0)) - g(x - Point(step, 0))) / (2 * step),
                                  (g(x + Point(0, step)) - g(x - Point(0, step))) / (2 * step));
      sum += mesh.area(t) / 3.0 * (grad - exact).squaredNorm();
    }
  }
  return std::sqrt(sum);
}

double h1_seminorm(const Field& f) {
  const Mesh& mesh = f.mesh();
  double sum = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) sum += mesh.area(t) * f.gradient(t).squaredNorm();
  return std::sqrt(sum);
}

double integral(const Field& f) {
  const Mesh& mesh = f.mesh();
  double sum = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) sum += mesh.area(t) * f.centroid_value(t);
  return sum;
}

Field truncation_test(const Field& u, const Field& u_boundary, double level) {
  if (!(level > 0.0)) throw ContractError("truncation level must be positive");
  Eigen::VectorXd out(u.size());
  for (int i = 0; i < u.size(); ++i) out[i] = truncate(u[i] - u_boundary[i], level);
  return Field(u.mesh(), std::move(out));
}

}  // namespace ee
