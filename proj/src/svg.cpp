#include "spiraldim/svg.hpp"

#include "spiraldim/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace spiraldim {

std::string svg_polyline(std::span<const Point2> points, double width_px) {
    if (points.empty()) {
        throw RangeError("svg_polyline: no points");
    }
    double x_lo = points[0].x, x_hi = points[0].x, y_lo = points[0].y, y_hi = points[0].y;
    for (const auto& p : points) {
        x_lo = std::min(x_lo, p.x);
        x_hi = std::max(x_hi, p.x);
        y_lo = std::min(y_lo, p.y);
        y_hi = std::max(y_hi, p.y);
    }
    const double span = std::max({x_hi - x_lo, y_hi - y_lo, 1e-300});
    const double margin = 0.05 * span;
    const double vx = x_lo - margin;
    const double vy = -(y_hi + margin);
    const double vw = (x_hi - x_lo) + 2 * margin;
    const double vh = (y_hi - y_lo) + 2 * margin;
    const double height_px = width_px * vh / vw;

    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.9g", v);
        return std::string(buf);
    };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width_px) << "\" height=\"" << num(height_px)
       << "\" viewBox=\"" << num(vx) << ' ' << num(vy) << ' ' << num(vw) << ' ' << num(vh) << "\">\n";
    os << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"" << num(vw / width_px)
       << "\" points=\"";
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (i > 0) {
            os << ' ';
        }
        os << num(points[i].x) << ',' << num(-points[i].y);
    }
    os << "\"/>\n</svg>\n";
    return os.str();
}

} // namespace spiraldim
