#include "blfquad/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "blfquad/errors.hpp"

namespace blfquad {

namespace {

constexpr int kMaxPointsPerSeries = 2500;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void include(double v) {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  void pad() {
    if (!(lo < hi)) {
      lo -= 1.0;
      hi += 1.0;
    }
    const double margin = 0.05 * (hi - lo);
    lo -= margin;
    hi += margin;
  }
  double map(double v, double a, double b) const {
    return a + (v - lo) / (hi - lo) * (b - a);
  }
};

void polyline(std::ostream& os, const std::vector<double>& xs,
              const std::vector<double>& ys, const Range& rx, const Range& ry,
              double x0, double x1, double y0, double y1,
              const std::string& color, bool dashed) {
  const size_t n = xs.size();
  const size_t stride = n > kMaxPointsPerSeries ? n / kMaxPointsPerSeries : 1;
  os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\"";
  if (dashed) os << " stroke-dasharray=\"5,4\"";
  os << " points=\"";
  for (size_t i = 0; i < n; i += stride) {
    os << num(rx.map(xs[i], x0, x1)) << ',' << num(ry.map(ys[i], y1, y0)) << ' ';
  }
  if (n > 0 && (n - 1) % stride != 0)
    os << num(rx.map(xs[n - 1], x0, x1)) << ',' << num(ry.map(ys[n - 1], y1, y0));
  os << "\"/>\n";
}

void axis_ticks(std::ostream& os, const Range& r, bool horizontal, double a0,
                double a1, double cross) {
  for (int i = 0; i <= 4; ++i) {
    const double v = r.lo + (r.hi - r.lo) * i / 4.0;
    const double p = horizontal ? r.map(v, a0, a1) : r.map(v, a1, a0);
    if (horizontal) {
      os << "<line x1=\"" << num(p) << "\" y1=\"" << num(cross) << "\" x2=\""
         << num(p) << "\" y2=\"" << num(cross + 4) << "\" stroke=\"#444\"/>\n";
      os << "<text x=\"" << num(p) << "\" y=\"" << num(cross + 16)
         << "\" font-size=\"10\" text-anchor=\"middle\">" << num(v) << "</text>\n";
    } else {
      os << "<line x1=\"" << num(cross - 4) << "\" y1=\"" << num(p) << "\" x2=\""
         << num(cross) << "\" y2=\"" << num(p) << "\" stroke=\"#444\"/>\n";
      os << "<text x=\"" << num(cross - 6) << "\" y=\"" << num(p + 3)
         << "\" font-size=\"10\" text-anchor=\"end\">" << num(v) << "</text>\n";
    }
  }
}

}  // namespace

void write_svg_panels(const std::string& path,
                      const std::vector<PlotPanel>& panels, int width,
                      int panel_height) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open plot file: " + path);
  const int total_h = panel_height * static_cast<int>(panels.size());
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << total_h << "\" font-family=\"sans-serif\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  const double ml = 60, mr = 15, mt = 28, mb = 34;
  for (size_t pi = 0; pi < panels.size(); ++pi) {
    const PlotPanel& panel = panels[pi];
    const double top = static_cast<double>(pi) * panel_height;
    const double x0 = ml, x1 = width - mr;
    const double y0 = top + mt, y1 = top + panel_height - mb;

    Range rx, ry;
    for (const PlotSeries& s : panel.series) {
      for (double v : s.x) rx.include(v);
      for (double v : s.y) ry.include(v);
    }
    for (const PlotHLine& h : panel.hlines) ry.include(h.y);
    rx.pad();
    ry.pad();

    os << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(top + 16)
       << "\" font-size=\"13\" text-anchor=\"middle\">" << panel.title
       << "</text>\n";
    os << "<rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\""
       << num(x1 - x0) << "\" height=\"" << num(y1 - y0)
       << "\" fill=\"none\" stroke=\"#444\"/>\n";
    axis_ticks(os, rx, true, x0, x1, y1);
    axis_ticks(os, ry, false, y0, y1, x0);

    for (const PlotHLine& h : panel.hlines) {
      const double py = ry.map(h.y, y1, y0);
      os << "<line x1=\"" << num(x0) << "\" y1=\"" << num(py) << "\" x2=\""
         << num(x1) << "\" y2=\"" << num(py) << "\" stroke=\"" << h.color
         << "\" stroke-dasharray=\"3,3\"/>\n";
    }
    double legend_x = x0 + 8;
    for (const PlotSeries& s : panel.series) {
      polyline(os, s.x, s.y, rx, ry, x0, x1, y0, y1, s.color, s.dashed);
      os << "<text x=\"" << num(legend_x) << "\" y=\"" << num(y0 + 12)
         << "\" font-size=\"10\" fill=\"" << s.color << "\">" << s.label
         << "</text>\n";
      legend_x += 10.0 * (s.label.size() + 2);
    }
    os << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\""
       << num(top + panel_height - 8) << "\" font-size=\"11\" text-anchor=\"middle\">"
       << panel.xlabel << "</text>\n";
    os << "<text x=\"" << num(x0 - 44) << "\" y=\"" << num((y0 + y1) / 2)
       << "\" font-size=\"11\" transform=\"rotate(-90 " << num(x0 - 44) << " "
       << num((y0 + y1) / 2) << ")\" text-anchor=\"middle\">" << panel.ylabel
       << "</text>\n";
  }
  os << "</svg>\n";
}

void write_svg_path3d(const std::string& path, const std::string& title,
                      const std::vector<Path3D>& paths, int size) {
  // Isometric projection: u = (x - y) cos30, v = (x + y) sin30 - z.
  const double c30 = std::sqrt(3.0) / 2.0, s30 = 0.5;
  std::vector<PlotSeries> proj;
  Range ru, rv;
  for (const Path3D& p : paths) {
    PlotSeries s;
    s.label = p.label;
    s.color = p.color;
    s.dashed = p.dashed;
    for (size_t i = 0; i < p.x.size(); ++i) {
      const double u = (p.x[i] - p.y[i]) * c30;
      const double v = (p.x[i] + p.y[i]) * s30 - p.z[i];
      s.x.push_back(u);
      s.y.push_back(-v);  // screen-up
      ru.include(u);
      rv.include(-v);
    }
    proj.push_back(std::move(s));
  }
  PlotPanel panel;
  panel.title = title;
  panel.xlabel = "isometric view";
  panel.series = std::move(proj);
  write_svg_panels(path, {panel}, size, size);
}

}  // namespace blfquad
