#pragma once

#include "spiraldim/polar_curve.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace spiraldim {

/// Upper bound on raster work (row/segment interval evaluations, or cells for
/// the cellwise reference) before ResolutionError.
inline constexpr double kMaxGridWork = 4e8;

/// Area of the set of grid cells (spacing s = grid_factor * eps, anchored at
/// the origin) whose centers lie within eps of the polyline, or inside the
/// closed disk of radius disk_radius around the origin when one is given.
///
/// Each grid row is intersected exactly with every segment's eps-capsule, the
/// resulting x-intervals are merged, and cell centers inside them are counted,
/// so the work is proportional to the curve length rather than the bounding
/// box area.
double sausage_area_polyline(std::span<const Point2> polyline, double eps, double grid_factor,
                             std::optional<double> disk_radius = std::nullopt);

/// Same counting rule, evaluated cell by cell with a segment spatial hash.
/// Quadratic in 1/s; meant for small problems and as a cross-check.
double sausage_area_cellwise(std::span<const Point2> polyline, double eps, double grid_factor,
                             std::optional<double> disk_radius = std::nullopt);

/// Number of half-open cells [i eps, (i+1) eps) x [j eps, (j+1) eps) that meet
/// the polyline or the closed disk of radius disk_radius around the origin.
std::uint64_t box_count_polyline(std::span<const Point2> polyline, double eps,
                                 std::optional<double> disk_radius = std::nullopt);

/// Euclidean distance from p to segment [a, b].
double point_segment_distance(Point2 p, Point2 a, Point2 b);

/// Uniform bucket grid over polyline segments for radius-eps proximity queries.
class SegmentHash {
public:
    SegmentHash(std::span<const Point2> polyline, double eps, double bucket_size);

    /// True if some segment lies within eps of p.
    bool near(Point2 p) const;

private:
    std::int64_t key(double x, double y) const;

    std::span<const Point2> pts_;
    double eps_;
    double bucket_;
    std::unordered_map<std::int64_t, std::vector<std::uint32_t>> buckets_;
};

} // namespace spiraldim
