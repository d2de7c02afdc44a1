#include "novikov/svg.hpp"

#include <cstdio>
#include <sstream>

namespace novikov {

namespace {

std::string fixed3(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  // Avoid "-0.000".
  std::string s = buf;
  if (s == "-0.000") s = "0.000";
  return s;
}

}  // namespace

std::string stroke_class(const LevelComponent& c) {
  if (c.spans_window) return "spanning";
  switch (c.kind) {
    case ComponentKind::kElectronic: return "electronic";
    case ComponentKind::kHole: return "hole";
    case ComponentKind::kBoundaryTruncated: return "truncated";
  }
  return "truncated";
}

std::string render_svg(const std::vector<LevelComponent>& components, const Window& window, double level,
                       const SvgStyle& style) {
  const int total = style.size + 2 * style.margin;
  const double scale = style.size / (2.0 * window.half_size());
  const double x0 = window.x0(), y1 = window.cy() + window.half_size();
  auto px = [&](double x) { return fixed3(style.margin + (x - x0) * scale); };
  auto py = [&](double y) { return fixed3(style.margin + (y1 - y) * scale); };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << total << "\" height=\"" << total + 30
      << "\" viewBox=\"0 0 " << total << ' ' << total + 30 << "\">\n";
  out << "<style>\n"
      << "path{fill:none;stroke-width:" << fixed3(style.stroke_width) << ";stroke-linejoin:round}\n"
      << ".electronic{stroke:" << style.electronic << "}\n"
      << ".hole{stroke:" << style.hole << "}\n"
      << ".spanning{stroke:" << style.spanning << "}\n"
      << ".truncated{stroke:" << style.truncated << "}\n"
      << "text{font-family:monospace;font-size:12px}\n"
      << "</style>\n";
  out << "<rect id=\"frame\" x=\"" << style.margin << "\" y=\"" << style.margin << "\" width=\"" << style.size
      << "\" height=\"" << style.size << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";

  out << "<g id=\"components\">\n";
  for (std::size_t id = 0; id < components.size(); ++id) {
    const auto& c = components[id];
    if (c.polyline.empty()) continue;
    out << "<path id=\"c" << id << "\" class=\"" << stroke_class(c) << "\" d=\"";
    const std::size_t n = c.closed && c.polyline.size() > 1 ? c.polyline.size() - 1 : c.polyline.size();
    for (std::size_t i = 0; i < n; ++i) {
      out << (i == 0 ? "M" : " L") << px(c.polyline[i].x) << ' ' << py(c.polyline[i].y);
    }
    if (c.closed) out << " Z";
    out << "\"/>\n";
  }
  out << "</g>\n";

  const int base = total + 8;
  const char* names[] = {"electronic", "hole", "spanning", "truncated"};
  out << "<g id=\"legend\">\n";
  for (int i = 0; i < 4; ++i) {
    const int x = style.margin + i * 110;
    out << "<path class=\"" << names[i] << "\" d=\"M" << x << ' ' << base << " L" << x + 20 << ' ' << base
        << "\"/>\n";
    out << "<text x=\"" << x + 24 << "\" y=\"" << base + 4 << "\">" << names[i] << "</text>\n";
  }
  out << "</g>\n";

  char caption[160];
  std::snprintf(caption, sizeof caption, "level c = %.6g, window [%.4g, %.4g] x [%.4g, %.4g]", level,
                window.x0(), window.x0() + 2 * window.half_size(), window.y0(),
                window.y0() + 2 * window.half_size());
  out << "<text id=\"caption\" x=\"" << style.margin << "\" y=\"" << style.margin - 14 << "\">" << caption
      << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace novikov
