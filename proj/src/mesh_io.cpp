#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ee/errors.hpp"
#include "ee/mesh.hpp"

namespace ee {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void parse_error(int line, const std::string& what) {
  throw GeometryError("mesh file line " + std::to_string(line) + ": " + what);
}

}  // namespace

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << mesh.node_count() << " nodes " << mesh.triangle_count() << " triangles "
      << mesh.boundary_edges().size() << " edges\n";
  for (int i = 0; i < mesh.node_count(); ++i)
    out << "v " << i << ' ' << format_double(mesh.node(i)(0)) << ' '
        << format_double(mesh.node(i)(1)) << '\n';
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& [a, b, c] = mesh.triangle(t);
    out << "t " << t << ' ' << a << ' ' << b << ' ' << c << '\n';
  }
  int id = 0;
  for (const auto& e : mesh.boundary_edges())
    out << "e " << id++ << ' ' << e.a << ' ' << e.b << ' '
        << (e.tag == BoundaryTag::Dirichlet ? 'D' : 'N') << '\n';
}

Mesh read_mesh(std::istream& in) {
  std::string line;
  int lineno = 0;
  std::size_t n_nodes = 0, n_tris = 0, n_edges = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream hs(line);
    std::string w1, w2, w3;
    if (!(hs >> n_nodes >> w1 >> n_tris >> w2 >> n_edges >> w3) || w1 != "nodes" ||
        w2 != "triangles" || w3 != "edges")
      parse_error(lineno, "expected header '<N> nodes <T> triangles <B> edges'");
    break;
  }
  std::vector<Point> nodes(n_nodes);
  std::vector<Mesh::Triangle> tris(n_tris);
  std::vector<BoundaryEdge> edges(n_edges);
  std::vector<char> seen_v(n_nodes, 0), seen_t(n_tris, 0), seen_e(n_edges, 0);

  const auto claim = [&](std::vector<char>& seen, long id, const char* kind) {
    if (id < 0 || static_cast<std::size_t>(id) >= seen.size() || seen[id])
      parse_error(lineno, std::string("bad or duplicate ") + kind + " id");
    seen[id] = 1;
  };

  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;
    long id = 0;
    if (!(ls >> id)) parse_error(lineno, "missing id");
    if (kind == "v") {
      claim(seen_v, id, "node");
      double x, y;
      if (!(ls >> x >> y)) parse_error(lineno, "bad node record");
      nodes[id] = Point(x, y);
    } else if (kind == "t") {
      claim(seen_t, id, "triangle");
      int a, b, c;
      if (!(ls >> a >> b >> c)) parse_error(lineno, "bad triangle record");
      tris[id] = {a, b, c};
    } else if (kind == "e") {
      claim(seen_e, id, "edge");
      int a, b;
      std::string tag;
      if (!(ls >> a >> b >> tag) || (tag != "D" && tag != "N"))
        parse_error(lineno, "bad edge record");
      edges[id] = {a, b, tag == "D" ? BoundaryTag::Dirichlet : BoundaryTag::Neumann};
    } else {
      parse_error(lineno, "unknown record '" + kind + "'");
    }
  }
  for (auto* seen : {&seen_v, &seen_t, &seen_e})
    for (char c : *seen)
      if (!c) throw GeometryError("mesh file: ids are not dense");
  return Mesh(std::move(nodes), std::move(tris), std::move(edges));
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GeometryError("cannot open mesh file " + path);
  return read_mesh(in);
}

}  // namespace ee
