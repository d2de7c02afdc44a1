#pragma once

#include <string>
#include <vector>

#include "novikov/sampling.hpp"
#include "novikov/tracer2d.hpp"

namespace novikov {

struct SvgStyle {
  /// Edge length of the plot area in pixels.
  int size = 640;
  int margin = 40;
  double stroke_width = 1.2;
  std::string electronic = "#1f5fbf";
  std::string hole = "#c03030";
  std::string spanning = "#208040";
  std::string truncated = "#909090";
};

/// Stroke class of a component: "spanning" wins over the closed kinds.
std::string stroke_class(const LevelComponent& c);

/// Deterministic SVG: fixed header, window frame, one path per component in
/// the given order, legend and a caption with the level. Coordinates are
/// printed with three decimals, so equal inputs give equal bytes.
std::string render_svg(const std::vector<LevelComponent>& components, const Window& window, double level,
                       const SvgStyle& style = {});

}  // namespace novikov
