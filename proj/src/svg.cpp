#include "spirallab/svg.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace spirallab {
namespace svg {

Projection Projection::parse(const std::string& text, int dim) {
  auto piece = [&](const std::string& s, int& index, bool& real) {
    std::string t = s;
    t.erase(std::remove_if(t.begin(), t.end(), ::isspace), t.end());
    bool is_re = t.rfind("re", 0) == 0;
    bool is_im = t.rfind("im", 0) == 0;
    if (!is_re && !is_im) throw ParseError("projection axis must be reK or imK: " + s);
    real = is_re;
    index = std::atoi(t.c_str() + 2) - 1;
    if (index < 0 || index >= dim) throw ParseError("projection coordinate out of range: " + s);
  };
  Projection proj;
  auto comma = text.find(',');
  if (comma == std::string::npos) throw ParseError("projection needs two axes, e.g. re1,re2");
  piece(text.substr(0, comma), proj.index_x, proj.real_x);
  piece(text.substr(comma + 1), proj.index_y, proj.real_y);
  return proj;
}

void Plot::polyline(const std::vector<PointCn>& pts, const std::string& color) {
  Line line;
  line.color = color;
  for (const auto& p : pts) line.pts.emplace_back(proj_.x(p), proj_.y(p));
  lines_.push_back(std::move(line));
}

void Plot::scatter(const std::vector<PointCn>& pts, const std::string& color, double radius) {
  Dots dots;
  dots.color = color;
  dots.radius = radius;
  for (const auto& p : pts) dots.pts.emplace_back(proj_.x(p), proj_.y(p));
  dots_.push_back(std::move(dots));
}

void Plot::write(const std::string& path) const {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  auto grow = [&](const std::pair<double, double>& p) {
    xmin = std::min(xmin, p.first);
    xmax = std::max(xmax, p.first);
    ymin = std::min(ymin, p.second);
    ymax = std::max(ymax, p.second);
  };
  for (const auto& l : lines_)
    for (const auto& p : l.pts) grow(p);
  for (const auto& d : dots_)
    for (const auto& p : d.pts) grow(p);
  if (xmin > xmax) {
    xmin = ymin = -1;
    xmax = ymax = 1;
  }
  double spanx = std::max(xmax - xmin, 1e-9), spany = std::max(ymax - ymin, 1e-9);
  double pad = 0.05 * std::max(spanx, spany);
  xmin -= pad;
  xmax += pad;
  ymin -= pad;
  ymax += pad;

  const double W = 640, H = 640;
  auto sx = [&](double x) { return (x - xmin) / (xmax - xmin) * W; };
  auto sy = [&](double y) { return H - (y - ymin) / (ymax - ymin) * H; };

  std::ostringstream os;
  os.precision(8);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W
     << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  os << "  <rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H
     << "\" fill=\"white\" stroke=\"#444\"/>\n";
  for (const auto& l : lines_) {
    os << "  <polyline fill=\"none\" stroke=\"" << l.color << "\" stroke-width=\"1.2\" points=\"";
    for (const auto& p : l.pts) os << sx(p.first) << "," << sy(p.second) << " ";
    os << "\"/>\n";
  }
  for (const auto& d : dots_)
    for (const auto& p : d.pts)
      os << "  <circle cx=\"" << sx(p.first) << "\" cy=\"" << sy(p.second) << "\" r=\"" << d.radius
         << "\" fill=\"" << d.color << "\"/>\n";
  os << "</svg>\n";

  std::ofstream out(path);
  if (!out) throw Error("cannot write svg: " + path);
  out << os.str();
}

}  // namespace svg
}  // namespace spirallab
