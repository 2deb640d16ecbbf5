#pragma once

#include <string>
#include <vector>

namespace blfquad {

struct PlotSeries {
  std::string label;
  std::vector<double> x, y;
  std::string color = "#1f77b4";
  bool dashed = false;
};

struct PlotHLine {
  double y = 0.0;
  std::string color = "#d62728";
};

/// One chart panel: series share the axes; hlines draw constraint bounds.
struct PlotPanel {
  std::string title, xlabel, ylabel;
  std::vector<PlotSeries> series;
  std::vector<PlotHLine> hlines;
};

/// Writes stacked line-chart panels as a standalone SVG.
void write_svg_panels(const std::string& path,
                      const std::vector<PlotPanel>& panels, int width = 860,
                      int panel_height = 240);

struct Path3D {
  std::string label;
  std::vector<double> x, y, z;
  std::string color = "#1f77b4";
  bool dashed = false;
};

/// Isometric projection of 3D paths onto a single SVG panel.
void write_svg_path3d(const std::string& path, const std::string& title,
                      const std::vector<Path3D>& paths, int size = 720);

}  // namespace blfquad
