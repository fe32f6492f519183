#pragma once

#include "spiraldim/polar_curve.hpp"

#include <span>
#include <string>

namespace spiraldim {

/// Standalone SVG document drawing the points as one polyline. The viewport
/// fits the bounding box with a 5% margin on every side; y points up.
std::string svg_polyline(std::span<const Point2> points, double width_px = 800.0);

} // namespace spiraldim
