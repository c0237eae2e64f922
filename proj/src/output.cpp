#include "ee/output.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ee/errors.hpp"

namespace ee {

using nlohmann::json;

namespace {

json point_json(const Point& p) { return json::array({p.x(), p.y()}); }

// 10-step ramp from dark blue to yellow.
constexpr std::array<const char*, 10> kRamp{"#30123b", "#4145ab", "#4675ed", "#39a2fc", "#1bcfd4",
                                            "#24eca6", "#61fc6c", "#a4fc3b", "#d1e834", "#f9ba38"};

using Polygon = std::vector<std::pair<Point, double>>;

// Keeps the part of the polygon with sign * (value - level) >= 0.
Polygon clip(const Polygon& poly, double level, double sign) {
  Polygon out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [p, fp] = poly[i];
    const auto& [q, fq] = poly[(i + 1) % n];
    const double dp = sign * (fp - level), dq = sign * (fq - level);
    if (dp >= 0) out.push_back(poly[i]);
    if ((dp >= 0) != (dq >= 0)) {
      const double s = dp / (dp - dq);
      out.push_back({p + s * (q - p), fp + s * (fq - fp)});
    }
  }
  return out;
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json to_json(const ConvergenceReport& r) {
  return {{"iterations", r.iterations}, {"change", r.change},   {"residuals", r.residuals},
          {"min_u", r.min_u},           {"status", to_string(r.status)}, {"theta", r.theta},
          {"message", r.message}};
}

json to_json(const DecayReport& r) {
  json j{{"center", point_json(r.center)},
         {"radii", r.radii},
         {"q", r.q},
         {"beta", r.fitted || !std::isnan(r.beta) ? json(r.beta) : json(nullptr)},
         {"raw_beta", std::isnan(r.raw_beta) ? json(nullptr) : json(r.raw_beta)},
         {"residual", std::isnan(r.residual) ? json(nullptr) : json(r.residual)},
         {"window", json::array({r.window_begin, r.window_end})}};
  if (!r.notice.empty()) j["notice"] = r.notice;
  return j;
}

json to_json(const BoundsReport& r) {
  json out = json::array();
  for (const auto& c : r.components)
    out.push_back({{"component", c.name},
                   {"min", c.min},
                   {"max", c.max},
                   {"boundary_min", c.boundary_min},
                   {"boundary_max", c.boundary_max},
                   {"margin", c.margin}});
  return out;
}

json to_json(const GrowthCertificate& c) {
  json box = json::array();
  for (const auto& [lo, hi] : c.box) box.push_back(json::array({lo, hi}));
  return {{"nu", c.nu},           {"mu", c.mu},   {"omega", c.omega},
          {"growth_ratio", c.growth_ratio}, {"samples", c.samples}, {"box", box},
          {"max_bound_usage", c.max_bound_usage}};
}

json to_json(const UniquenessProbe& p) {
  return {{"verdict", to_string(p.verdict)},
          {"distance", p.distance},
          {"threshold", p.threshold},
          {"data_magnitude", p.data_magnitude},
          {"first", to_json(p.first)},
          {"second", to_json(p.second)}};
}

json to_json(const ThresholdMap& m) {
  json cells = json::array();
  for (const auto& c : m.cells)
    cells.push_back({{"voltage", c.voltage},
                     {"temperature", c.temperature},
                     {"min_u", c.min_u},
                     {"status", to_string(c.status)},
                     {"iterations", c.iterations}});
  json frontier = json::array();
  for (double f : m.frontier) frontier.push_back(std::isnan(f) ? json(nullptr) : json(f));
  return {{"voltages", m.voltages},
          {"temperatures", m.temperatures},
          {"floor_fraction", m.floor_fraction},
          {"cells", cells},
          {"frontier", frontier},
          {"frontier_exists", m.frontier_exists},
          {"frontier_monotone", m.frontier_monotone},
          {"min_u_monotone", m.min_u_monotone},
          {"zero_voltage_error", m.zero_voltage_error},
          {"violations", m.violations}};
}

json to_json(const EntropyBalance& e) {
  return {{"boundary_flux", e.boundary_flux},
          {"production", e.production},
          {"min_local_production", e.min_local_production},
          {"residual", e.residual}};
}

json to_json(const WeakResidual& w) {
  return {{"value", w.value}, {"scale", w.scale}, {"relative", w.relative()}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

void write_field_csv(const std::filesystem::path& path, const Field& f) {
  const Mesh& mesh = f.mesh();
  std::ostringstream os;
  os << "node_id,x,y,value\n";
  for (int i = 0; i < mesh.node_count(); ++i)
    os << i << ',' << format_number(mesh.node(i).x()) << ',' << format_number(mesh.node(i).y())
       << ',' << format_number(f[i]) << '\n';
  write_text(path, os.str());
}

void write_field_svg(const std::filesystem::path& path, const Field& f, const std::string& title) {
  const Mesh& mesh = f.mesh();
  Point lo = mesh.node(0), hi = mesh.node(0);
  for (const Point& p : mesh.nodes()) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double size = 480.0, margin = 20.0;
  const double scale = size / std::max(hi.x() - lo.x(), hi.y() - lo.y());
  const auto sx = [&](const Point& p) { return margin + scale * (p.x() - lo.x()); };
  const auto sy = [&](const Point& p) { return margin + scale * (hi.y() - p.y()); };
  const double vmin = f.values().minCoeff(), vmax = f.values().maxCoeff();
  const double span = vmax > vmin ? vmax - vmin : 1.0;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size + 2 * margin + 120
     << "\" height=\"" << size + 2 * margin + 20 << "\">\n";
  os << "<title>" << title << "</title>\n<g stroke=\"none\">\n";
  char buf[64];
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangle(t);
    Polygon base;
    for (int k = 0; k < 3; ++k) base.push_back({mesh.node(tri[k]), f[tri[k]]});
    for (int band = 0; band < 10; ++band) {
      const double a = vmin + span * band / 10.0, b = vmin + span * (band + 1) / 10.0;
      Polygon poly = base;
      if (band > 0) poly = clip(poly, a, 1.0);
      if (band < 9) poly = clip(poly, b, -1.0);
      if (poly.size() < 3) continue;
      os << "<polygon fill=\"" << kRamp[band] << "\" points=\"";
      for (const auto& [p, v] : poly) {
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", sx(p), sy(p));
        os << buf;
      }
      os << "\"/>\n";
    }
  }
  os << "</g>\n";
  for (int band = 0; band < 10; ++band) {
    const double y = margin + (9 - band) * size / 10.0;
    std::snprintf(buf, sizeof buf, "%.4g", vmin + span * band / 10.0);
    os << "<rect x=\"" << size + 2 * margin << "\" y=\"" << y << "\" width=\"20\" height=\""
       << size / 10.0 << "\" fill=\"" << kRamp[band] << "\"/>\n";
    os << "<text x=\"" << size + 2 * margin + 26 << "\" y=\"" << y + size / 10.0
       << "\" font-size=\"11\">" << buf << "</text>\n";
  }
  os << "<text x=\"" << margin << "\" y=\"" << size + 2 * margin + 12 << "\" font-size=\"13\">"
     << title << "</text>\n</svg>\n";
  write_text(path, os.str());
}

}  // namespace ee
