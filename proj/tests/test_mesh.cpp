#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <map>
#include <set>
#include <sstream>

#include "ee/errors.hpp"
#include "ee/mesh.hpp"

using namespace ee;

namespace {

BoundaryTag left_only(const Point& x) {
  return x.x() < 1e-12 ? BoundaryTag::Dirichlet : BoundaryTag::Neumann;
}

std::set<std::pair<double, double>> corner_points(const Mesh& mesh) {
  std::set<std::pair<double, double>> out;
  for (int n : mesh.corner_nodes()) out.insert({mesh.node(n).x(), mesh.node(n).y()});
  return out;
}

double max_angle(const Mesh& mesh, int t) {
  const auto& tri = mesh.triangle(t);
  double worst = 0.0;
  for (int k = 0; k < 3; ++k) {
    const Point a = mesh.node(tri[(k + 1) % 3]) - mesh.node(tri[k]);
    const Point b = mesh.node(tri[(k + 2) % 3]) - mesh.node(tri[k]);
    worst = std::max(worst, std::acos(a.dot(b) / (a.norm() * b.norm())));
  }
  return worst;
}

}  // namespace

TEST_CASE("rectangle counts and area") {
  const Mesh a = build_rectangle(1, 1, 1, 1);
  CHECK(a.node_count() == 4);
  CHECK(a.triangle_count() == 2);
  const Mesh b = build_rectangle(2, 2, 1, 1);
  CHECK(b.node_count() == 9);
  CHECK(b.triangle_count() == 8);
  CHECK(build_rectangle(4, 2, 2, 1).total_area() == 2.0);
  for (int t = 0; t < b.triangle_count(); ++t) CHECK(b.area(t) > 0.0);
  CHECK(b.dirichlet_edge_count() == 0);
}

TEST_CASE("rectangle rejects bad extents") {
  CHECK_THROWS_AS(build_rectangle(2, 2, 0.0, 1.0), GeometryError);
  CHECK_THROWS_AS(build_rectangle(2, 2, 1.0, -1.0), GeometryError);
  CHECK_THROWS_AS(build_rectangle(0, 2, 1.0, 1.0), GeometryError);
}

TEST_CASE("structured triangles are right triangles") {
  const Mesh m = build_rectangle(5, 3, 2.0, 1.5);
  for (int t = 0; t < m.triangle_count(); ++t)
    CHECK(max_angle(m, t) <= std::numbers::pi / 2 + 1e-12);
}

TEST_CASE("L-shape") {
  const Mesh one = build_lshape(1);
  CHECK(one.triangle_count() == 6);
  CHECK(one.total_area() == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(build_lshape(2).triangle_count() == 24);
  // The boundary polygon (0,0),(2,0),(2,1),(1,1),(1,2),(0,2) has six vertices;
  // at n = 1 its boundary carries eight nodes.
  CHECK(polygon_vertex_count(one) == 6);
  CHECK(one.boundary_nodes().size() == 8);
  REQUIRE(one.reentrant_corners().size() == 1);
  CHECK(one.reentrant_corners().front() == Point(1, 1));
  CHECK_FALSE(one.contains(Point(1.5, 1.5)));
  CHECK(one.contains(Point(1.0, 1.0)));
}

TEST_CASE("generated meshes reproduce the polygon area") {
  for (int n : {1, 3, 7}) {
    CHECK(std::abs(build_lshape(n).total_area() - 3.0) <= 3e-12);
    CHECK(std::abs(build_rectangle(n, 2 * n, 0.3, 1.7).total_area() - 0.51) <= 0.51e-12);
  }
}

TEST_CASE("boundary edges close into loops") {
  const Mesh m = build_lshape(3);
  std::map<int, int> in, out;
  for (const auto& e : m.boundary_edges()) {
    ++out[e.a];
    ++in[e.b];
  }
  CHECK(in.size() == out.size());
  for (const auto& [node, k] : out) {
    CHECK(k == 1);
    CHECK(in[node] == 1);
  }
}

TEST_CASE("tagging and corner nodes") {
  const Mesh square = build_rectangle(4, 4, 1, 1);
  const Mesh all_d = tag_boundary(square, [](const Point&) { return BoundaryTag::Dirichlet; });
  CHECK(all_d.corner_nodes().empty());
  CHECK(all_d.dirichlet_edge_count() == 16);
  const Mesh all_n = tag_boundary(square, [](const Point&) { return BoundaryTag::Neumann; });
  CHECK(all_n.dirichlet_edge_count() == 0);
  const Mesh left = tag_boundary(square, left_only);
  CHECK(corner_points(left) == std::set<std::pair<double, double>>{{0.0, 0.0}, {0.0, 1.0}});
}

TEST_CASE("uniform refinement") {
  const Mesh coarse = tag_boundary(build_rectangle(1, 1, 1, 1), left_only);
  const Mesh fine = refine_uniform(coarse);
  CHECK(fine.triangle_count() == 8);
  CHECK(fine.node_count() == 9);
  CHECK(fine.total_area() == coarse.total_area());
  for (int t = 0; t < fine.triangle_count(); ++t) CHECK(fine.area(t) == doctest::Approx(0.125));
  CHECK(corner_points(fine) == corner_points(coarse));
  // Child boundary edges keep the tag of the parent edge they lie on.
  for (const auto& e : fine.boundary_edges()) {
    const Point mid = 0.5 * (fine.node(e.a) + fine.node(e.b));
    CHECK(e.tag == left_only(mid));
  }
}

TEST_CASE("refinement keeps corners of a mixed L-shape") {
  const auto pred = [](const Point& x) {
    return x.y() < 1e-12 ? BoundaryTag::Dirichlet : BoundaryTag::Neumann;
  };
  const Mesh m = tag_boundary(build_lshape(2), pred);
  const Mesh r = refine_uniform(refine_uniform(m));
  CHECK(corner_points(r) == corner_points(m));
  CHECK(std::abs(r.total_area() - 3.0) <= 3e-12);
  CHECK(r.reentrant_corners() == m.reentrant_corners());
}

TEST_CASE("ball restriction") {
  const Mesh m = build_rectangle(16, 16, 1, 1);
  BallQuery q{Point(0.5, 0.5), {2.0, 0.1, 0.05}};
  const auto covers = ball_restriction(m, q);
  REQUIRE(covers.size() == 3);
  CHECK(covers[0].elements.size() == static_cast<std::size_t>(m.triangle_count()));
  for (const auto& e : covers[0].elements) CHECK(e.weight == doctest::Approx(m.area(e.triangle)));
  for (std::size_t k = 1; k < covers.size(); ++k) {
    double sum = 0.0;
    for (const auto& e : covers[k].elements) sum += e.weight;
    const double disk = std::numbers::pi * q.radii[k] * q.radii[k];
    CHECK(std::abs(sum - disk) <= 1e-3 * disk);
  }
}

TEST_CASE("ball restriction away from every element") {
  const Mesh m = build_lshape(2);
  // (1.5, 1.0) lies on the boundary; the cut-out square is empty.
  const auto covers = ball_restriction(m, {Point(1.5, 1.0), {0.5, 1e-3}});
  CHECK_FALSE(covers[1].elements.empty());
  const auto inner = clipped_triangle_area(Point(3, 3), Point(4, 3), Point(3, 4), Point(0, 0), 1.0);
  CHECK(inner == 0.0);
  CHECK_THROWS_AS(ball_restriction(m, {Point(1.5, 1.5), {0.1}}), DomainError);
  CHECK_THROWS_AS(ball_restriction(m, {Point(0.5, 0.5), {0.1, 0.2}}), ContractError);
}

TEST_CASE("dyadic radii") {
  const Mesh m = build_rectangle(2, 2, 1, 1);
  const auto r = dyadic_radii(m);
  REQUIRE(r.size() == 7);
  CHECK(r[0] == doctest::Approx(std::sqrt(2.0) / 4));
  for (std::size_t k = 1; k < r.size(); ++k) CHECK(r[k] == r[k - 1] / 2);
}

TEST_CASE("mesh text format round trip") {
  const Mesh m = tag_boundary(build_lshape(3), left_only);
  std::stringstream io;
  write_mesh(io, m);
  const std::string text = io.str();
  CHECK(text.rfind(std::to_string(m.node_count()) + " nodes", 0) == 0);
  const Mesh back = read_mesh(io);
  REQUIRE(back.node_count() == m.node_count());
  REQUIRE(back.triangle_count() == m.triangle_count());
  for (int i = 0; i < m.node_count(); ++i) CHECK(back.node(i) == m.node(i));
  for (int t = 0; t < m.triangle_count(); ++t) CHECK(back.triangle(t) == m.triangle(t));
  CHECK(back.dirichlet_nodes() == m.dirichlet_nodes());
  CHECK(back.corner_nodes() == m.corner_nodes());
}

TEST_CASE("mesh reader rejects malformed input") {
  std::stringstream bad("3 nodes 1 triangles 3 edges\nv 0 0 0\nv 1 1 0\nv 2 0 1\nt 0 0 2 1\n"
                        "e 0 0 1 N\ne 1 1 2 N\ne 2 2 0 N\n");
  CHECK_THROWS_AS(read_mesh(bad), GeometryError);
  std::stringstream junk("hello");
  CHECK_THROWS(read_mesh(junk));
}
