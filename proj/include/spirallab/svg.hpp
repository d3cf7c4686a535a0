#pragma once

#include <string>
#include <vector>

#include "spirallab/expr.hpp"

namespace spirallab {
namespace svg {

// Projection of C^n onto a drawing plane: one real coordinate per axis,
// written like "re1,im2" (default "re1,re2"; "re1,im1" for n = 1 plots).
struct Projection {
  int index_x = 0;
  bool real_x = true;
  int index_y = 1;
  bool real_y = true;

  static Projection parse(const std::string& text, int dim);
  double x(const PointCn& p) const { return real_x ? p[index_x].real() : p[index_x].imag(); }
  double y(const PointCn& p) const { return real_y ? p[index_y].real() : p[index_y].imag(); }
};

// Static SVG 1.1 writer for trajectory polylines and point scatters.
class Plot {
 public:
  Plot(Projection proj) : proj_(proj) {}

  void polyline(const std::vector<PointCn>& pts, const std::string& color);
  void scatter(const std::vector<PointCn>& pts, const std::string& color, double radius = 2.0);

  void write(const std::string& path) const;

 private:
  struct Line {
    std::vector<std::pair<double, double>> pts;
    std::string color;
  };
  struct Dots {
    std::vector<std::pair<double, double>> pts;
    std::string color;
    double radius;
  };

  Projection proj_;
  std::vector<Line> lines_;
  std::vector<Dots> dots_;
};

}  // namespace svg
}  // namespace spirallab
