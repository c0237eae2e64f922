#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ee {

using Point = Eigen::Vector2d;

enum class BoundaryTag : std::uint8_t { Dirichlet, Neumann };

struct BoundaryEdge {
  int a = 0;
  int b = 0;
  BoundaryTag tag = BoundaryTag::Neumann;
};

/// Signed area of the triangle (a, b, c); positive for counterclockwise order.
template <typename Derived>
typename Derived::Scalar signed_area(const Eigen::MatrixBase<Derived>& a,
                                     const Eigen::MatrixBase<Derived>& b,
                                     const Eigen::MatrixBase<Derived>& c) {
  return ((b(0) - a(0)) * (c(1) - a(1)) - (b(1) - a(1)) * (c(0) - a(0))) / 2;
}

/// Gradients of the three P1 hat functions of a triangle, one per column.
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 3> p1_gradients(const Eigen::Matrix<Scalar, 2, 1>& a,
                                         const Eigen::Matrix<Scalar, 2, 1>& b,
                                         const Eigen::Matrix<Scalar, 2, 1>& c) {
  const Scalar twice_area = 2 * signed_area(a, b, c);
  Eigen::Matrix<Scalar, 2, 3> g;
  g << b(1) - c(1), c(1) - a(1), a(1) - b(1),
       c(0) - b(0), a(0) - c(0), b(0) - a(0);
  return g / twice_area;
}

/// Conforming triangulation of a polygonal domain with a boundary split into a
/// Dirichlet part S and a Neumann part. Immutable after construction.
class Mesh {
 public:
  using Triangle = std::array<int, 3>;

  Mesh() = default;

  /// Builds a mesh and derives its boundary (all edges tagged Neumann).
  /// Throws GeometryError when a triangle is degenerate or clockwise, when
  /// an edge is shared by more than two triangles, or when the boundary does
  /// not form closed loops.
  Mesh(std::vector<Point> nodes, std::vector<Triangle> triangles);

  /// Same, but with an explicit boundary edge list (e.g. read from a file).
  Mesh(std::vector<Point> nodes, std::vector<Triangle> triangles,
       std::vector<BoundaryEdge> boundary);

  int node_count() const { return static_cast<int>(nodes_.size()); }
  int triangle_count() const { return static_cast<int>(triangles_.size()); }

  const std::vector<Point>& nodes() const { return nodes_; }
  const Point& node(int i) const { return nodes_[i]; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const Triangle& triangle(int t) const { return triangles_[t]; }
  const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_; }
  const std::vector<int>& corner_nodes() const { return corners_; }

  double area(int t) const { return areas_[t]; }
  const Eigen::Matrix<double, 2, 3>& gradients(int t) const { return gradients_[t]; }
  Point centroid(int t) const;
  double total_area() const;
  double diameter() const { return diameter_; }

  /// Per-node flag, true on nodes of Dirichlet-tagged edges.
  const std::vector<char>& dirichlet_mask() const { return dirichlet_mask_; }
  std::vector<int> dirichlet_nodes() const;
  int dirichlet_edge_count() const;
  std::vector<int> boundary_nodes() const;

  /// Whether p lies in the closed domain (up to a relative tolerance).
  bool contains(const Point& p, double tol = 1e-12) const;

  /// Reentrant corner points registered by the generator (L-shape).
  const std::vector<Point>& reentrant_corners() const { return reentrant_; }
  Mesh with_reentrant_corners(std::vector<Point> corners) const;

  /// Copy of the mesh with new boundary tags (same edge order).
  Mesh with_tags(const std::vector<BoundaryTag>& tags) const;

 private:
  void finalize();
  void compute_corners();

  std::vector<Point> nodes_;
  std::vector<Triangle> triangles_;
  std::vector<BoundaryEdge> boundary_;
  std::vector<int> corners_;
  std::vector<double> areas_;
  std::vector<Eigen::Matrix<double, 2, 3>> gradients_;
  std::vector<char> dirichlet_mask_;
  std::vector<Point> reentrant_;
  double diameter_ = 0.0;
};

/// Structured mesh of [0,width]x[0,height]: nx*ny cells split into two
/// right triangles each. All boundary edges are tagged Neumann.
Mesh build_rectangle(int nx, int ny, double width = 1.0, double height = 1.0);

/// L-shaped domain (0,2)^2 \ [1,2)^2 from three unit squares of n x n cells.
/// The reentrant corner (1,1) is recorded on the mesh.
Mesh build_lshape(int n);

/// Retags every boundary edge by evaluating the predicate at its midpoint.
Mesh tag_boundary(const Mesh& mesh, const std::function<BoundaryTag(const Point&)>& predicate);

/// Splits every triangle into four by its edge midpoints. Existing nodes keep
/// their ids; midpoint nodes are appended. Child boundary edges inherit tags.
Mesh refine_uniform(const Mesh& mesh);

/// Number of geometric polygon vertices on the boundary (nodes where the
/// boundary direction turns).
int polygon_vertex_count(const Mesh& mesh);

struct BallQuery {
  Point center = Point::Zero();
  std::vector<double> radii;  ///< strictly decreasing, positive
};

/// Dyadic radii r_k = r0 * 2^-k for k = 0..levels; r0 defaults to diam/4.
std::vector<double> dyadic_radii(const Mesh& mesh, int levels = 6, double r0 = 0.0);

struct ClippedElement {
  int triangle = 0;
  double weight = 0.0;  ///< area of triangle intersected with the ball
};

struct BallCover {
  double radius = 0.0;
  std::vector<ClippedElement> elements;
};

/// For each radius, the triangles meeting B_r(center) with their clipped
/// areas. Partially covered triangles are subdivided recursively (depth <= 6);
/// leaves are clipped against the linear interpolant of the distance function.
std::vector<BallCover> ball_restriction(const Mesh& mesh, const BallQuery& query);

/// Area of the triangle (a,b,c) inside the disk B_r(center).
double clipped_triangle_area(const Point& a, const Point& b, const Point& c,
                             const Point& center, double r, int max_depth = 6);

/// Node ids within distance r of center.
std::vector<int> nodes_in_ball(const Mesh& mesh, const Point& center, double r);

/// Line-oriented ASCII mesh format:
///   <N> nodes <T> triangles <B> edges
///   v <id> <x> <y>
///   t <id> <n1> <n2> <n3>
///   e <id> <n1> <n2> <D|N>
void write_mesh(std::ostream& out, const Mesh& mesh);
Mesh read_mesh(std::istream& in);
Mesh read_mesh_file(const std::string& path);

}  // namespace ee
