#include "ee/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <utility>

#include "ee/errors.hpp"

namespace ee {

namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey edge_key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

double point_segment_distance(const Point& p, const Point& a, const Point& b) {
  const Point ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

bool in_triangle(const Point& p, const Point& a, const Point& b, const Point& c, double tol) {
  const double area = signed_area(a, b, c);
  const double l0 = signed_area(p, b, c) / area;
  const double l1 = signed_area(a, p, c) / area;
  const double l2 = signed_area(a, b, p) / area;
  return l0 >= -tol && l1 >= -tol && l2 >= -tol;
}

double point_triangle_distance(const Point& p, const Point& a, const Point& b, const Point& c) {
  if (in_triangle(p, a, b, c, 0.0)) return 0.0;
  return std::min({point_segment_distance(p, a, b), point_segment_distance(p, b, c),
                   point_segment_distance(p, c, a)});
}

// Fraction of a triangle where the linear interpolant of the vertex values
// is <= 0.
double negative_fraction(double s0, double s1, double s2) {
  const std::array<double, 3> s{s0, s1, s2};
  int negative = 0;
  for (double v : s) negative += v <= 0.0 ? 1 : 0;
  if (negative == 0) return 0.0;
  if (negative == 3) return 1.0;
  if (negative == 1) {
    const int i = s0 <= 0 ? 0 : (s1 <= 0 ? 1 : 2);
    const double si = s[i], sj = s[(i + 1) % 3], sk = s[(i + 2) % 3];
    return si * si / ((si - sj) * (si - sk));
  }
  const int k = s0 > 0 ? 0 : (s1 > 0 ? 1 : 2);
  const double sk = s[k], si = s[(k + 1) % 3], sj = s[(k + 2) % 3];
  return 1.0 - sk * sk / ((sk - si) * (sk - sj));
}

}  // namespace

Mesh::Mesh(std::vector<Point> nodes, std::vector<Triangle> triangles)
    : nodes_(std::move(nodes)), triangles_(std::move(triangles)) {
  std::map<EdgeKey, int> uses;
  std::map<EdgeKey, std::pair<int, int>> oriented;
  for (const auto& tri : triangles_) {
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k], b = tri[(k + 1) % 3];
      if (a < 0 || b < 0 || a >= node_count() || b >= node_count())
        throw GeometryError("triangle references a missing node");
      const auto key = edge_key(a, b);
      if (++uses[key] == 1) {
        oriented[key] = {a, b};
      } else if (oriented[key] != std::pair<int, int>{b, a}) {
        throw GeometryError("non-conforming or inconsistently oriented edge");
      }
    }
  }
  // Boundary edges keep the orientation of their triangle, so the domain lies
  // to their left. Triangle order makes the edge list deterministic.
  for (const auto& tri : triangles_) {
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k], b = tri[(k + 1) % 3];
      const auto key = edge_key(a, b);
      const int count = uses[key];
      if (count > 2) throw GeometryError("edge shared by more than two triangles");
      if (count == 1) boundary_.push_back({a, b, BoundaryTag::Neumann});
    }
  }
  finalize();
}

Mesh::Mesh(std::vector<Point> nodes, std::vector<Triangle> triangles,
           std::vector<BoundaryEdge> boundary)
    : nodes_(std::move(nodes)), triangles_(std::move(triangles)), boundary_(std::move(boundary)) {
  Mesh derived(nodes_, triangles_);
  std::set<EdgeKey> expected;
  for (const auto& e : derived.boundary_edges()) expected.insert(edge_key(e.a, e.b));
  std::set<EdgeKey> given;
  for (const auto& e : boundary_) {
    if (!given.insert(edge_key(e.a, e.b)).second)
      throw GeometryError("boundary edge listed twice");
  }
  if (given != expected)
    throw GeometryError("boundary edges do not cover the domain boundary exactly once");
  finalize();
}

void Mesh::finalize() {
  areas_.resize(triangles_.size());
  gradients_.resize(triangles_.size());
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& [a, b, c] = triangles_[t];
    const double area = signed_area(nodes_[a], nodes_[b], nodes_[c]);
    if (!(area > 0.0))
      throw GeometryError("triangle " + std::to_string(t) + " has non-positive signed area");
    areas_[t] = area;
    gradients_[t] = p1_gradients<double>(nodes_[a], nodes_[b], nodes_[c]);
  }

  // Closed loops: every boundary node has as many outgoing as incoming edges.
  std::map<int, int> balance;
  for (const auto& e : boundary_) {
    ++balance[e.a];
    --balance[e.b];
  }
  for (const auto& [node, bal] : balance) {
    if (bal != 0)
      throw GeometryError("boundary edges do not form closed loops at node " +
                          std::to_string(node));
  }

  diameter_ = 0.0;
  const auto bnodes = boundary_nodes();
  for (std::size_t i = 0; i < bnodes.size(); ++i)
    for (std::size_t j = i + 1; j < bnodes.size(); ++j)
      diameter_ = std::max(diameter_, (nodes_[bnodes[i]] - nodes_[bnodes[j]]).norm());

  compute_corners();
}

void Mesh::compute_corners() {
  std::vector<char> has_d(nodes_.size(), 0), has_n(nodes_.size(), 0);
  for (const auto& e : boundary_) {
    auto& flag = e.tag == BoundaryTag::Dirichlet ? has_d : has_n;
    flag[e.a] = flag[e.b] = 1;
  }
  corners_.clear();
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (has_d[i] && has_n[i]) corners_.push_back(static_cast<int>(i));
  dirichlet_mask_ = std::move(has_d);
}

Point Mesh::centroid(int t) const {
  const auto& [a, b, c] = triangles_[t];
  return (nodes_[a] + nodes_[b] + nodes_[c]) / 3.0;
}

double Mesh::total_area() const {
  double sum = 0.0;
  for (double a : areas_) sum += a;
  return sum;
}

std::vector<int> Mesh::dirichlet_nodes() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < dirichlet_mask_.size(); ++i)
    if (dirichlet_mask_[i]) out.push_back(static_cast<int>(i));
  return out;
}

int Mesh::dirichlet_edge_count() const {
  return static_cast<int>(std::count_if(boundary_.begin(), boundary_.end(), [](const auto& e) {
    return e.tag == BoundaryTag::Dirichlet;
  }));
}

std::vector<int> Mesh::boundary_nodes() const {
  std::set<int> s;
  for (const auto& e : boundary_) {
    s.insert(e.a);
    s.insert(e.b);
  }
  return {s.begin(), s.end()};
}

bool Mesh::contains(const Point& p, double tol) const {
  const double scale = std::max(diameter_, 1.0);
  for (int t = 0; t < triangle_count(); ++t) {
    const auto& [a, b, c] = triangles_[t];
    if (point_triangle_distance(p, nodes_[a], nodes_[b], nodes_[c]) <= tol * scale) return true;
  }
  return false;
}

Mesh Mesh::with_reentrant_corners(std::vector<Point> corners) const {
  Mesh copy = *this;
  copy.reentrant_ = std::move(corners);
  return copy;
}

Mesh Mesh::with_tags(const std::vector<BoundaryTag>& tags) const {
  if (tags.size() != boundary_.size()) throw ContractError("tag count differs from edge count");
  Mesh copy = *this;
  for (std::size_t i = 0; i < tags.size(); ++i) copy.boundary_[i].tag = tags[i];
  copy.compute_corners();
  return copy;
}

Mesh build_rectangle(int nx, int ny, double width, double height) {
  if (nx < 1 || ny < 1) throw GeometryError("rectangle needs nx, ny >= 1");
  if (!(width > 0.0) || !(height > 0.0)) throw GeometryError("rectangle extent must be positive");
  std::vector<Point> nodes;
  nodes.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      nodes.emplace_back(width * i / nx, height * j / ny);
  std::vector<Mesh::Triangle> tris;
  tris.reserve(static_cast<std::size_t>(2 * nx * ny));
  const auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return Mesh(std::move(nodes), std::move(tris));
}

Mesh build_lshape(int n) {
  if (n < 1) throw GeometryError("L-shape needs n >= 1");
  const int m = 2 * n;
  std::vector<int> id(static_cast<std::size_t>((m + 1) * (m + 1)), -1);
  std::vector<Point> nodes;
  for (int j = 0; j <= m; ++j) {
    for (int i = 0; i <= m; ++i) {
      if (i > n && j > n) continue;
      id[j * (m + 1) + i] = static_cast<int>(nodes.size());
      nodes.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
    }
  }
  const auto at = [&](int i, int j) { return id[j * (m + 1) + i]; };
  std::vector<Mesh::Triangle> tris;
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      if (i >= n && j >= n) continue;
      tris.push_back({at(i, j), at(i + 1, j), at(i + 1, j + 1)});
      tris.push_back({at(i, j), at(i + 1, j + 1), at(i, j + 1)});
    }
  }
  return Mesh(std::move(nodes), std::move(tris)).with_reentrant_corners({Point(1.0, 1.0)});
}

Mesh tag_boundary(const Mesh& mesh, const std::function<BoundaryTag(const Point&)>& predicate) {
  std::vector<BoundaryTag> tags;
  tags.reserve(mesh.boundary_edges().size());
  for (const auto& e : mesh.boundary_edges())
    tags.push_back(predicate(0.5 * (mesh.node(e.a) + mesh.node(e.b))));
  return mesh.with_tags(tags);
}

Mesh refine_uniform(const Mesh& mesh) {
  std::vector<Point> nodes = mesh.nodes();
  std::map<EdgeKey, int> midpoint;
  const auto mid = [&](int a, int b) {
    const auto key = edge_key(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const int id = static_cast<int>(nodes.size());
    nodes.push_back(0.5 * (mesh.node(a) + mesh.node(b)));
    midpoint.emplace(key, id);
    return id;
  };
  std::vector<Mesh::Triangle> tris;
  tris.reserve(4 * mesh.triangles().size());
  for (const auto& [a, b, c] : mesh.triangles()) {
    const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
    tris.push_back({a, ab, ca});
    tris.push_back({ab, b, bc});
    tris.push_back({ca, bc, c});
    tris.push_back({ab, bc, ca});
  }
  std::vector<BoundaryEdge> edges;
  edges.reserve(2 * mesh.boundary_edges().size());
  for (const auto& e : mesh.boundary_edges()) {
    const int m = mid(e.a, e.b);
    edges.push_back({e.a, m, e.tag});
    edges.push_back({m, e.b, e.tag});
  }
  return Mesh(std::move(nodes), std::move(tris), std::move(edges))
      .with_reentrant_corners(mesh.reentrant_corners());
}

int polygon_vertex_count(const Mesh& mesh) {
  std::map<int, int> incoming, outgoing;
  for (const auto& e : mesh.boundary_edges()) {
    outgoing[e.a] = e.b;
    incoming[e.b] = e.a;
  }
  int count = 0;
  for (const auto& [node, next] : outgoing) {
    const Point din = mesh.node(node) - mesh.node(incoming.at(node));
    const Point dout = mesh.node(next) - mesh.node(node);
    const double cross = din(0) * dout(1) - din(1) * dout(0);
    if (std::abs(cross) > 1e-12 * din.norm() * dout.norm()) ++count;
  }
  return count;
}

std::vector<double> dyadic_radii(const Mesh& mesh, int levels, double r0) {
  if (r0 <= 0.0) r0 = mesh.diameter() / 4.0;
  std::vector<double> radii;
  for (int k = 0; k <= levels; ++k) radii.push_back(std::ldexp(r0, -k));
  return radii;
}

double clipped_triangle_area(const Point& a, const Point& b, const Point& c, const Point& center,
                             double r, int max_depth) {
  const double area = signed_area(a, b, c);
  const double da = (a - center).norm(), db = (b - center).norm(), dc = (c - center).norm();
  if (da <= r && db <= r && dc <= r) return area;
  if (point_triangle_distance(center, a, b, c) >= r) return 0.0;
  if (max_depth <= 0) return area * negative_fraction(da - r, db - r, dc - r);
  const Point ab = 0.5 * (a + b), bc = 0.5 * (b + c), ca = 0.5 * (c + a);
  return clipped_triangle_area(a, ab, ca, center, r, max_depth - 1) +
         clipped_triangle_area(ab, b, bc, center, r, max_depth - 1) +
         clipped_triangle_area(ca, bc, c, center, r, max_depth - 1) +
         clipped_triangle_area(ab, bc, ca, center, r, max_depth - 1);
}

std::vector<BallCover> ball_restriction(const Mesh& mesh, const BallQuery& query) {
  if (!mesh.contains(query.center))
    throw DomainError("ball center lies outside the closed domain");
  for (std::size_t k = 0; k < query.radii.size(); ++k) {
    if (!(query.radii[k] > 0.0)) throw ContractError("ball radii must be positive");
    if (k > 0 && !(query.radii[k] < query.radii[k - 1]))
      throw ContractError("ball radii must be strictly decreasing");
  }
  std::vector<BallCover> out;
  out.reserve(query.radii.size());
  for (double r : query.radii) {
    BallCover cover{r, {}};
    for (int t = 0; t < mesh.triangle_count(); ++t) {
      const auto& [a, b, c] = mesh.triangle(t);
      const double w =
          clipped_triangle_area(mesh.node(a), mesh.node(b), mesh.node(c), query.center, r);
      if (w > 0.0) cover.elements.push_back({t, w});
    }
    out.push_back(std::move(cover));
  }
  return out;
}

std::vector<int> nodes_in_ball(const Mesh& mesh, const Point& center, double r) {
  std::vector<int> out;
  for (int i = 0; i < mesh.node_count(); ++i)
    if ((mesh.node(i) - center).norm() <= r) out.push_back(i);
  return out;
}

}  // namespace ee
