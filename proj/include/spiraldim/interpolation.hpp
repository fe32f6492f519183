#pragma once

#include <span>
#include <vector>

namespace spiraldim {

/// Shape-preserving piecewise cubic Hermite interpolant (PCHIP).
///
/// Slopes follow the Fritsch-Butland weighted harmonic mean, so monotone data
/// yields a monotone interpolant and positive data stays positive. Works with
/// as few as two knots (degenerating to linear interpolation).
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y);

    double operator()(double t) const;
    double derivative(double t) const;

    /// Exact integral of the interpolant over [a, b] (a <= b, both in range).
    double integral(double a, double b) const;

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }
    std::span<const double> knots_x() const { return x_; }
    std::span<const double> knots_y() const { return y_; }
    bool empty() const { return x_.empty(); }

private:
    std::size_t segment(double t) const;
    double segment_integral(std::size_t k, double a, double b) const;

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> slope_;
};

/// PCHIP knot slopes for strictly increasing x.
std::vector<double> pchip_slopes(std::span<const double> x, std::span<const double> y);

} // namespace spiraldim
