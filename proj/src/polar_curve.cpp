#include "spiraldim/polar_curve.hpp"

#include "spiraldim/csv.hpp"
#include "spiraldim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace spiraldim {

namespace {

double cross(Point2 o, Point2 a, Point2 b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

std::vector<Point2> convex_hull(std::vector<Point2> pts) {
    std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end(), [](Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    if (pts.size() < 3) {
        return pts;
    }
    std::vector<Point2> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) {
            --k;
        }
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) {
            --k;
        }
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

} // namespace

PolarCurve::PolarCurve(std::vector<double> phi, std::vector<double> f, std::string source, bool mirrored)
    : phi_(std::move(phi)),
      f_(std::move(f)),
      source_(std::move(source)),
      mirrored_(mirrored),
      onset_time_(std::numeric_limits<double>::quiet_NaN()) {
    if (phi_.size() != f_.size() || phi_.size() < 2) {
        throw SpecError("PolarCurve: need at least two (phi, f) samples");
    }
    for (std::size_t k = 0; k < phi_.size(); ++k) {
        if (!(f_[k] > 0.0) || !std::isfinite(f_[k])) {
            throw SpecError("PolarCurve: f must be positive and finite");
        }
        if (k > 0 && !(phi_[k] > phi_[k - 1])) {
            throw SpecError("PolarCurve: phi must be strictly increasing");
        }
    }
    monotone_ = true;
    for (std::size_t k = 1; k < f_.size(); ++k) {
        if (f_[k] > f_[k - 1] * (1.0 + 1e-12)) {
            monotone_ = false;
            break;
        }
    }
    interp_ = std::make_shared<const MonotoneCubic>(phi_, f_);

    const auto pts = points();
    cumulative_.assign(pts.size(), 0.0);
    for (std::size_t k = 1; k < pts.size(); ++k) {
        cumulative_[k] = cumulative_[k - 1] + distance(pts[k - 1], pts[k]);
    }
}

double PolarCurve::value_at(double phi) const {
    if (phi < phi_begin() || phi > phi_end()) {
        std::ostringstream os;
        os << "phi = " << phi << " outside curve span [" << phi_begin() << ", " << phi_end() << "]";
        throw RangeError(os.str());
    }
    return (*interp_)(phi);
}

std::vector<double> PolarCurve::derivative() const {
    const std::size_t n = phi_.size();
    std::vector<double> d(n);
    d[0] = (f_[1] - f_[0]) / (phi_[1] - phi_[0]);
    d[n - 1] = (f_[n - 1] - f_[n - 2]) / (phi_[n - 1] - phi_[n - 2]);
    for (std::size_t k = 1; k + 1 < n; ++k) {
        d[k] = (f_[k + 1] - f_[k - 1]) / (phi_[k + 1] - phi_[k - 1]);
    }
    return d;
}

std::vector<Point2> PolarCurve::points() const {
    std::vector<Point2> pts(phi_.size());
    const double sign = mirrored_ ? 1.0 : -1.0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        pts[k] = {f_[k] * std::cos(phi_[k]), sign * f_[k] * std::sin(phi_[k])};
    }
    return pts;
}

PolarCurve to_polar(const Trajectory& traj, bool mirror, double grid_step) {
    if (!(grid_step > 0.0 && grid_step <= kPi / 16.0)) {
        throw DomainError("to_polar: grid step must lie in (0, pi/16]");
    }
    if (traj.max_angle_step >= kPi / 2.0) {
        throw DomainError("to_polar: trajectory angle step must be below pi/2");
    }
    const auto& s = traj.samples;
    if (s.size() < 3) {
        throw NotSpiralError("to_polar: trajectory has too few samples");
    }
    const auto theta = unwrapped_angle(traj);

    // Start right after the last sample pair that rotates too slowly.
    std::size_t start = 0;
    for (std::size_t i = 1; i < s.size(); ++i) {
        const double rate = (theta[i] - theta[i - 1]) / (s[i].t - s[i - 1].t);
        if (!(rate < -kMinAngularRate)) {
            start = i;
        }
    }
    const double turns = (theta[start] - theta.back()) / kTwoPi;
    if (start + 2 >= s.size() || turns < kCertifiedTurns) {
        std::ostringstream os;
        os << "no certified clockwise rotation: " << turns << " monotone turns after t = " << s[start].t
           << " (need " << kCertifiedTurns << ")";
        throw NotSpiralError(os.str());
    }

    std::vector<double> raw_phi, raw_r;
    raw_phi.reserve(s.size() - start);
    raw_r.reserve(s.size() - start);
    for (std::size_t i = start; i < s.size(); ++i) {
        raw_phi.push_back(-theta[i]);
        raw_r.push_back(std::hypot(s[i].x, s[i].y));
    }
    const MonotoneCubic r_of_phi(raw_phi, raw_r);

    const double phi0 = raw_phi.front();
    const auto count = static_cast<std::size_t>(std::floor((raw_phi.back() - phi0) / grid_step)) + 1;
    std::vector<double> phi(count), f(count);
    for (std::size_t k = 0; k < count; ++k) {
        phi[k] = phi0 + static_cast<double>(k) * grid_step;
        f[k] = r_of_phi(std::min(phi[k], raw_phi.back()));
    }
    PolarCurve curve(std::move(phi), std::move(f), traj.source, mirror);
    curve.set_onset_time(s[start].t);
    return curve;
}

double arc_length(const PolarCurve& curve, double phi_a, double phi_b) {
    if (phi_a > phi_b || phi_a < curve.phi_begin() || phi_b > curve.phi_end()) {
        throw RangeError("arc_length: need phi_begin <= phi_a <= phi_b <= phi_end");
    }
    const auto phi = curve.phi();
    const auto cum = curve.cumulative_length();
    auto position = [&](double p) {
        auto it = std::upper_bound(phi.begin(), phi.end(), p);
        std::size_t k = static_cast<std::size_t>(it - phi.begin());
        k = std::min(k == 0 ? 0 : k - 1, phi.size() - 2);
        const double frac = (p - phi[k]) / (phi[k + 1] - phi[k]);
        return cum[k] + frac * (cum[k + 1] - cum[k]);
    };
    return position(phi_b) - position(phi_a);
}

double turn_decrement(const PolarCurve& curve, double phi) {
    if (phi < curve.phi_begin() || phi + kTwoPi > curve.phi_end()) {
        throw RangeError("turn_decrement: phi and phi + 2 pi must lie in the curve span");
    }
    return curve.value_at(phi) - curve.value_at(phi + kTwoPi);
}

double diameter(std::span<const Point2> pts) {
    if (pts.empty()) {
        throw RangeError("diameter: empty point set");
    }
    double best = 0.0;
    if (pts.size() <= 10000) {
        for (std::size_t i = 0; i < pts.size(); ++i) {
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                best = std::max(best, distance(pts[i], pts[j]));
            }
        }
        return best;
    }
    const auto hull = convex_hull(std::vector<Point2>(pts.begin(), pts.end()));
    const std::size_t m = hull.size();
    if (m == 1) {
        return 0.0;
    }
    if (m == 2) {
        return distance(hull[0], hull[1]);
    }
    // Rotating calipers over antipodal pairs.
    std::size_t j = 1;
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t ni = (i + 1) % m;
        while (std::abs(cross(hull[i], hull[ni], hull[(j + 1) % m])) >
               std::abs(cross(hull[i], hull[ni], hull[j]))) {
            j = (j + 1) % m;
        }
        best = std::max({best, distance(hull[i], hull[j]), distance(hull[ni], hull[j])});
    }
    return best;
}

double diameter(const PolarCurve& curve) {
    const auto pts = curve.points();
    return diameter(pts);
}

std::vector<PhiDerivative> ode_f_prime(const Trajectory& traj, const DampingSpec& damping) {
    const auto theta = unwrapped_angle(traj);
    const std::size_t start = rotation_onset(traj);
    std::vector<PhiDerivative> out;
    for (std::size_t i = start; i < traj.samples.size(); ++i) {
        const auto& s = traj.samples[i];
        const double h = eval_h(damping, s.t);
        const double r2 = s.x * s.x + s.y * s.y;
        const double dx = s.y;
        const double dy = -s.x - h * s.y;
        const double r = std::sqrt(r2);
        const double dr = (s.x * dx + s.y * dy) / r;
        const double dtheta = (s.x * dy - s.y * dx) / r2;
        out.push_back({-theta[i], -dr / dtheta});
    }
    return out;
}

std::string polar_curve_csv(const PolarCurve& curve) {
    std::ostringstream os;
    os << "phi,f\n";
    for (std::size_t k = 0; k < curve.size(); ++k) {
        os << format_g17(curve.phi()[k]) << ',' << format_g17(curve.f()[k]) << '\n';
    }
    return os.str();
}

void write_polar_curve_csv(const PolarCurve& curve, const std::string& path) {
    write_text_file(path, polar_curve_csv(curve));
}

PolarCurve read_polar_curve_csv(const std::string& path) {
    const auto rows = read_numeric_csv(path, {"phi", "f"});
    std::vector<double> phi, f;
    for (const auto& r : rows) {
        phi.push_back(r[0]);
        f.push_back(r[1]);
    }
    try {
        return PolarCurve(std::move(phi), std::move(f), path);
    } catch (const SpecError& e) {
        throw ConfigError(std::string("invalid curve CSV: ") + e.what());
    }
}

} // namespace spiraldim
