#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace spiraldim {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Ordinary least-squares line y = slope * x + intercept.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double r_squared = 1.0;
    double residual_sup = 0.0;  ///< max |y - fitted y|
    std::size_t n = 0;
};

/// Throws FitDegenerateError for fewer than two points or zero x-variance.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// n points geometrically spaced from lo to hi inclusive (lo, hi > 0).
std::vector<double> log_space(double lo, double hi, std::size_t n);

/// Adaptive Gauss-Kronrod quadrature over [a, b]. The interval is split into
/// geometric panels first so integrands that decay like powers of t over many
/// decades are resolved everywhere.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10);

/// Fits log g(t) ~ -p log t + c over log-spaced samples of [t_lo, t_hi] and
/// returns p. The callback returns log g(t) directly so that rapidly decaying
/// integrands do not underflow.
double tail_power_exponent(const std::function<double(double)>& log_g,
                           double t_lo, double t_hi, std::size_t n = 64);

} // namespace spiraldim
