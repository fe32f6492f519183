#include "spiraldim/interpolation.hpp"

#include "spiraldim/errors.hpp"

#include <algorithm>
#include <cmath>

namespace spiraldim {

namespace {

// Endpoint slope from the three-point formula, clipped to keep monotonicity.
double edge_slope(double h0, double h1, double d0, double d1) {
    double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (std::signbit(m) != std::signbit(d0) || d0 == 0.0) {
        m = 0.0;
    } else if (std::signbit(d0) != std::signbit(d1) && std::abs(m) > 3.0 * std::abs(d0)) {
        m = 3.0 * d0;
    }
    return m;
}

} // namespace

std::vector<double> pchip_slopes(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    std::vector<double> m(n, 0.0);
    if (n < 2) {
        return m;
    }
    std::vector<double> h(n - 1), d(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        h[k] = x[k + 1] - x[k];
        d[k] = (y[k + 1] - y[k]) / h[k];
    }
    if (n == 2) {
        m[0] = m[1] = d[0];
        return m;
    }
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (d[k - 1] * d[k] > 0.0) {
            const double w1 = 2.0 * h[k] + h[k - 1];
            const double w2 = h[k] + 2.0 * h[k - 1];
            m[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
        }
    }
    m[0] = edge_slope(h[0], h[1], d[0], d[1]);
    m[n - 1] = edge_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    return m;
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    if (x_.size() != y_.size() || x_.size() < 2) {
        throw SpecError("MonotoneCubic: need at least two knots with matching ordinates");
    }
    for (std::size_t k = 0; k + 1 < x_.size(); ++k) {
        if (!(x_[k + 1] > x_[k])) {
            throw SpecError("MonotoneCubic: abscissae must be strictly increasing");
        }
    }
    slope_ = pchip_slopes(x_, y_);
}

std::size_t MonotoneCubic::segment(double t) const {
    if (t < x_.front() || t > x_.back()) {
        throw DomainError("MonotoneCubic: argument outside knot range");
    }
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    std::size_t k = static_cast<std::size_t>(it - x_.begin());
    k = k == 0 ? 0 : k - 1;
    return std::min(k, x_.size() - 2);
}

double MonotoneCubic::operator()(double t) const {
    const std::size_t k = segment(t);
    if (t == x_[k]) {
        return y_[k];
    }
    const double h = x_[k + 1] - x_[k];
    const double s = (t - x_[k]) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;
    return h00 * y_[k] + h10 * h * slope_[k] + h01 * y_[k + 1] + h11 * h * slope_[k + 1];
}

double MonotoneCubic::derivative(double t) const {
    const std::size_t k = segment(t);
    const double h = x_[k + 1] - x_[k];
    const double s = (t - x_[k]) / h;
    const double s2 = s * s;
    const double d00 = (6.0 * s2 - 6.0 * s) / h;
    const double d10 = 3.0 * s2 - 4.0 * s + 1.0;
    const double d01 = (-6.0 * s2 + 6.0 * s) / h;
    const double d11 = 3.0 * s2 - 2.0 * s;
    return d00 * y_[k] + d10 * slope_[k] + d01 * y_[k + 1] + d11 * slope_[k + 1];
}

double MonotoneCubic::segment_integral(std::size_t k, double a, double b) const {
    // Antiderivative of the Hermite basis in the local coordinate s.
    const double h = x_[k + 1] - x_[k];
    auto prim = [&](double t) {
        const double s = (t - x_[k]) / h;
        const double s2 = s * s, s3 = s2 * s, s4 = s3 * s;
        const double H00 = 0.5 * s4 - s3 + s;
        const double H10 = 0.25 * s4 - 2.0 * s3 / 3.0 + 0.5 * s2;
        const double H01 = -0.5 * s4 + s3;
        const double H11 = 0.25 * s4 - s3 / 3.0;
        return h * (H00 * y_[k] + H10 * h * slope_[k] + H01 * y_[k + 1] + H11 * h * slope_[k + 1]);
    };
    return prim(b) - prim(a);
}

double MonotoneCubic::integral(double a, double b) const {
    if (b < a) {
        return -integral(b, a);
    }
    const std::size_t ka = segment(a);
    const std::size_t kb = segment(b);
    if (ka == kb) {
        return segment_integral(ka, a, b);
    }
    double total = segment_integral(ka, a, x_[ka + 1]);
    for (std::size_t k = ka + 1; k < kb; ++k) {
        total += segment_integral(k, x_[k], x_[k + 1]);
    }
    total += segment_integral(kb, x_[kb], b);
    return total;
}

} // namespace spiraldim
