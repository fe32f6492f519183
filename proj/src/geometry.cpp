#include "spiraldim/geometry.hpp"

#include "spiraldim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace spiraldim {

namespace {

struct Interval {
    double lo;
    double hi;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

// x-extent of the eps-capsule around segment [a, b] on the line y = y0.
// The capsule is convex, so the union of its two end disks and its central
// rectangle cuts the line in a single interval.
Interval capsule_row(Point2 a, Point2 b, double eps, double y0) {
    Interval out{kInf, -kInf};
    for (const Point2 p : {a, b}) {
        const double dy = y0 - p.y;
        if (std::abs(dy) <= eps) {
            const double w = std::sqrt(eps * eps - dy * dy);
            out.lo = std::min(out.lo, p.x - w);
            out.hi = std::max(out.hi, p.x + w);
        }
    }
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    if (len2 == 0.0) {
        return out;
    }
    const double len = std::sqrt(len2);
    const double ry = y0 - a.y;

    // Projection parameter in [0, 1]: (x - ax) dx + ry dy in [0, len2].
    double plo = -kInf, phi = kInf;
    if (dx != 0.0) {
        double u = (0.0 - ry * dy) / dx;
        double v = (len2 - ry * dy) / dx;
        if (u > v) {
            std::swap(u, v);
        }
        plo = a.x + u;
        phi = a.x + v;
    } else if (ry * dy < 0.0 || ry * dy > len2) {
        return out;
    }
    // Perpendicular distance: |(x - ax) dy - ry dx| <= eps len.
    double clo = -kInf, chi = kInf;
    if (dy != 0.0) {
        double u = (-eps * len + ry * dx) / dy;
        double v = (eps * len + ry * dx) / dy;
        if (u > v) {
            std::swap(u, v);
        }
        clo = a.x + u;
        chi = a.x + v;
    } else if (std::abs(ry * dx) > eps * len) {
        return out;
    }
    const double lo = std::max(plo, clo);
    const double hi = std::min(phi, chi);
    if (lo <= hi) {
        out.lo = std::min(out.lo, lo);
        out.hi = std::max(out.hi, hi);
    }
    return out;
}

// Number of integers i with (i + 0.5) s in [lo, hi].
std::int64_t centers_in(double lo, double hi, double s) {
    const double first = std::ceil(lo / s - 0.5);
    const double last = std::floor(hi / s - 0.5);
    return last >= first ? static_cast<std::int64_t>(last - first) + 1 : 0;
}

void check_eps(double eps, double grid_factor) {
    if (!(eps > 0.0) || !std::isfinite(eps)) {
        throw DomainError("epsilon must be positive and finite");
    }
    if (!(grid_factor > 0.0 && grid_factor <= 0.125)) {
        throw DomainError("grid_factor must lie in (0, 1/8]");
    }
}

struct Bounds {
    double xmin = kInf, xmax = -kInf, ymin = kInf, ymax = -kInf;
};

Bounds inflated_bounds(std::span<const Point2> pts, double eps, std::optional<double> disk) {
    Bounds b;
    for (const auto& p : pts) {
        b.xmin = std::min(b.xmin, p.x);
        b.xmax = std::max(b.xmax, p.x);
        b.ymin = std::min(b.ymin, p.y);
        b.ymax = std::max(b.ymax, p.y);
    }
    b.xmin -= eps;
    b.xmax += eps;
    b.ymin -= eps;
    b.ymax += eps;
    if (disk) {
        b.xmin = std::min(b.xmin, -*disk);
        b.xmax = std::max(b.xmax, *disk);
        b.ymin = std::min(b.ymin, -*disk);
        b.ymax = std::max(b.ymax, *disk);
    }
    return b;
}

} // namespace

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0) {
        t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
    }
    return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

double sausage_area_polyline(std::span<const Point2> polyline, double eps, double grid_factor,
                             std::optional<double> disk_radius) {
    check_eps(eps, grid_factor);
    if (polyline.empty()) {
        throw RangeError("sausage_area: empty polyline");
    }
    const double s = grid_factor * eps;
    const double disk = disk_radius.value_or(-1.0);

    struct Seg {
        std::int64_t j0, j1;
        std::uint32_t i;
    };
    std::vector<Seg> segs;
    const std::size_t nseg = polyline.size() == 1 ? 1 : polyline.size() - 1;
    segs.reserve(nseg);
    double work = 0.0;
    for (std::size_t i = 0; i < nseg; ++i) {
        const Point2 a = polyline[i];
        const Point2 b = polyline[std::min(i + 1, polyline.size() - 1)];
        // Capsules strictly inside the disk add nothing.
        if (disk > eps && std::hypot(a.x, a.y) <= disk - eps && std::hypot(b.x, b.y) <= disk - eps) {
            continue;
        }
        const double ylo = std::min(a.y, b.y) - eps;
        const double yhi = std::max(a.y, b.y) + eps;
        const auto j0 = static_cast<std::int64_t>(std::ceil(ylo / s - 0.5));
        const auto j1 = static_cast<std::int64_t>(std::floor(yhi / s - 0.5));
        if (j1 < j0) {
            continue;
        }
        work += static_cast<double>(j1 - j0 + 1);
        segs.push_back({j0, j1, static_cast<std::uint32_t>(i)});
    }
    if (work > kMaxGridWork) {
        std::ostringstream os;
        os << "sausage_area: " << work << " row-segment evaluations at eps = " << eps
           << " exceed the budget of " << kMaxGridWork;
        throw ResolutionError(os.str());
    }
    std::sort(segs.begin(), segs.end(), [](const Seg& l, const Seg& r) { return l.j0 < r.j0; });

    std::int64_t djlo = 1, djhi = 0;
    if (disk >= 0.0) {
        djlo = static_cast<std::int64_t>(std::ceil(-disk / s - 0.5));
        djhi = static_cast<std::int64_t>(std::floor(disk / s - 0.5));
    }

    std::int64_t count = 0;
    std::vector<Seg> active;
    std::vector<Interval> row;
    std::size_t next = 0;
    std::int64_t jend = djhi;
    for (const auto& sg : segs) {
        jend = std::max(jend, sg.j1);
    }
    std::int64_t j = segs.empty() ? djlo : std::min(segs.front().j0, djlo);
    for (; j <= jend; ++j) {
        if (active.empty()) {
            // Jump over rows that touch neither a capsule nor the disk.
            std::int64_t jump = next < segs.size() ? segs[next].j0 : std::numeric_limits<std::int64_t>::max();
            if (djlo <= djhi && j <= djhi) {
                jump = std::min(jump, std::max(j, djlo));
            }
            if (jump == std::numeric_limits<std::int64_t>::max()) {
                break;
            }
            j = std::max(j, jump);
        }
        while (next < segs.size() && segs[next].j0 <= j) {
            active.push_back(segs[next++]);
        }
        const double y0 = (static_cast<double>(j) + 0.5) * s;
        row.clear();
        std::size_t keep = 0;
        for (std::size_t k = 0; k < active.size(); ++k) {
            const Seg sg = active[k];
            if (sg.j1 < j) {
                continue;
            }
            active[keep++] = sg;
            const Point2 a = polyline[sg.i];
            const Point2 b = polyline[std::min<std::size_t>(sg.i + 1, polyline.size() - 1)];
            const Interval iv = capsule_row(a, b, eps, y0);
            if (iv.lo <= iv.hi) {
                row.push_back(iv);
            }
        }
        active.resize(keep);
        if (j >= djlo && j <= djhi && disk * disk >= y0 * y0) {
            const double w = std::sqrt(disk * disk - y0 * y0);
            row.push_back({-w, w});
        }
        if (row.empty()) {
            continue;
        }
        std::sort(row.begin(), row.end(), [](const Interval& l, const Interval& r) { return l.lo < r.lo; });
        Interval cur = row.front();
        for (std::size_t k = 1; k < row.size(); ++k) {
            if (row[k].lo <= cur.hi) {
                cur.hi = std::max(cur.hi, row[k].hi);
            } else {
                count += centers_in(cur.lo, cur.hi, s);
                cur = row[k];
            }
        }
        count += centers_in(cur.lo, cur.hi, s);
    }
    return static_cast<double>(count) * s * s;
}

SegmentHash::SegmentHash(std::span<const Point2> polyline, double eps, double bucket_size)
    : pts_(polyline), eps_(eps), bucket_(bucket_size) {
    const std::size_t nseg = pts_.size() == 1 ? 1 : pts_.size() - 1;
    for (std::size_t i = 0; i < nseg; ++i) {
        const Point2 a = pts_[i];
        const Point2 b = pts_[std::min(i + 1, pts_.size() - 1)];
        const auto bx0 = static_cast<std::int64_t>(std::floor((std::min(a.x, b.x) - eps) / bucket_));
        const auto bx1 = static_cast<std::int64_t>(std::floor((std::max(a.x, b.x) + eps) / bucket_));
        const auto by0 = static_cast<std::int64_t>(std::floor((std::min(a.y, b.y) - eps) / bucket_));
        const auto by1 = static_cast<std::int64_t>(std::floor((std::max(a.y, b.y) + eps) / bucket_));
        for (auto bx = bx0; bx <= bx1; ++bx) {
            for (auto by = by0; by <= by1; ++by) {
                buckets_[(bx << 32) ^ (by & 0xffffffff)].push_back(static_cast<std::uint32_t>(i));
            }
        }
    }
}

std::int64_t SegmentHash::key(double x, double y) const {
    const auto bx = static_cast<std::int64_t>(std::floor(x / bucket_));
    const auto by = static_cast<std::int64_t>(std::floor(y / bucket_));
    return (bx << 32) ^ (by & 0xffffffff);
}

bool SegmentHash::near(Point2 p) const {
    auto it = buckets_.find(key(p.x, p.y));
    if (it == buckets_.end()) {
        return false;
    }
    for (const auto i : it->second) {
        const Point2 a = pts_[i];
        const Point2 b = pts_[std::min<std::size_t>(i + 1, pts_.size() - 1)];
        if (point_segment_distance(p, a, b) <= eps_) {
            return true;
        }
    }
    return false;
}

double sausage_area_cellwise(std::span<const Point2> polyline, double eps, double grid_factor,
                             std::optional<double> disk_radius) {
    check_eps(eps, grid_factor);
    if (polyline.empty()) {
        throw RangeError("sausage_area: empty polyline");
    }
    const double s = grid_factor * eps;
    const Bounds b = inflated_bounds(polyline, eps, disk_radius);
    const auto i0 = static_cast<std::int64_t>(std::ceil(b.xmin / s - 0.5));
    const auto i1 = static_cast<std::int64_t>(std::floor(b.xmax / s - 0.5));
    const auto j0 = static_cast<std::int64_t>(std::ceil(b.ymin / s - 0.5));
    const auto j1 = static_cast<std::int64_t>(std::floor(b.ymax / s - 0.5));
    const double cells = static_cast<double>(i1 - i0 + 1) * static_cast<double>(j1 - j0 + 1);
    if (cells > kMaxGridWork) {
        throw ResolutionError("sausage_area_cellwise: grid exceeds the cell budget");
    }
    const SegmentHash hash(polyline, eps, 2.0 * eps);
    const double disk2 = disk_radius ? *disk_radius * *disk_radius : -1.0;
    std::int64_t count = 0;
    for (auto j = j0; j <= j1; ++j) {
        const double y = (static_cast<double>(j) + 0.5) * s;
        for (auto i = i0; i <= i1; ++i) {
            const double x = (static_cast<double>(i) + 0.5) * s;
            if (x * x + y * y <= disk2 || hash.near({x, y})) {
                ++count;
            }
        }
    }
    return static_cast<double>(count) * s * s;
}

std::uint64_t box_count_polyline(std::span<const Point2> polyline, double eps,
                                 std::optional<double> disk_radius) {
    if (!(eps > 0.0) || !std::isfinite(eps)) {
        throw DomainError("epsilon must be positive and finite");
    }
    if (polyline.empty()) {
        throw RangeError("box_count: empty polyline");
    }
    const double R = disk_radius.value_or(-1.0);

    // Closed-disk row extents: cells i_lo..i_hi in row j meet the disk.
    auto disk_row = [&](std::int64_t j, std::int64_t& ilo, std::int64_t& ihi) {
        if (R < 0.0) {
            return false;
        }
        const double ylo = static_cast<double>(j) * eps;
        const double yhi = ylo + eps;
        const double dy = ylo > 0.0 ? ylo : (yhi < 0.0 ? -yhi : 0.0);
        if (dy > R) {
            return false;
        }
        const double w = std::sqrt(R * R - dy * dy);
        ilo = static_cast<std::int64_t>(std::ceil(-w / eps - 1.0));
        ihi = static_cast<std::int64_t>(std::floor(w / eps));
        return ilo <= ihi;
    };

    std::vector<std::uint64_t> keys;
    auto add = [&](double x, double y) {
        const auto i = static_cast<std::int64_t>(std::floor(x / eps));
        const auto j = static_cast<std::int64_t>(std::floor(y / eps));
        std::int64_t ilo = 0, ihi = -1;
        if (disk_row(j, ilo, ihi) && i >= ilo && i <= ihi) {
            return;
        }
        keys.push_back((static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
                       static_cast<std::uint32_t>(j));
    };

    std::vector<double> cuts;
    for (std::size_t k = 0; k + 1 < polyline.size() || k == 0; ++k) {
        const Point2 a = polyline[k];
        const Point2 b = polyline[std::min(k + 1, polyline.size() - 1)];
        add(a.x, a.y);
        add(b.x, b.y);
        // Parameters where the segment crosses grid lines.
        cuts.clear();
        cuts.push_back(0.0);
        cuts.push_back(1.0);
        for (int axis = 0; axis < 2; ++axis) {
            const double p0 = axis == 0 ? a.x : a.y;
            const double p1 = axis == 0 ? b.x : b.y;
            if (p0 == p1) {
                continue;
            }
            const double lo = std::min(p0, p1), hi = std::max(p0, p1);
            for (double g = std::ceil(lo / eps); g * eps <= hi; g += 1.0) {
                const double t = (g * eps - p0) / (p1 - p0);
                if (t > 0.0 && t < 1.0) {
                    cuts.push_back(t);
                }
            }
        }
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            const double tc = cuts[c];
            const double tm = 0.5 * (cuts[c] + cuts[c + 1]);
            add(a.x + tc * (b.x - a.x), a.y + tc * (b.y - a.y));
            add(a.x + tm * (b.x - a.x), a.y + tm * (b.y - a.y));
        }
    }
    std::sort(keys.begin(), keys.end());
    std::uint64_t count = static_cast<std::uint64_t>(std::unique(keys.begin(), keys.end()) - keys.begin());

    if (R >= 0.0) {
        const auto jlo = static_cast<std::int64_t>(std::ceil(-R / eps - 1.0));
        const auto jhi = static_cast<std::int64_t>(std::floor(R / eps));
        for (auto j = jlo; j <= jhi; ++j) {
            std::int64_t ilo = 0, ihi = -1;
            if (disk_row(j, ilo, ihi)) {
                count += static_cast<std::uint64_t>(ihi - ilo + 1);
            }
        }
    }
    return count;
}

} // namespace spiraldim
