#pragma once

#include "spiraldim/polar_curve.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace spiraldim {

enum class Method { SausageGrid, BoxCount };
enum class WindowPolicy { FullRange, AutoPlateau };

/// LogLinear: least-squares line through (log eps, log area).
/// HeadCorrected: area = A eps^(2-d) + B eps. The linear term is what a
/// rectifiable stretch of curve contributes (2 eps times its length), so it
/// absorbs the finite-start bias of truncated spirals, which otherwise decays
/// only like eps^(d-1).
enum class FitModel { LogLinear, HeadCorrected };
enum class Verdict { Match, Mismatch, NoPrediction };

inline constexpr double kDefaultGridFactor = 1.0 / 8.0;
/// Fits need at least this many epsilon rungs.
inline constexpr std::size_t kMinFitPoints = 5;

struct ProfileEntry {
    double epsilon = 0.0;
    double area = 0.0;  ///< |Gamma_eps| for SausageGrid, box count N(eps) for BoxCount
    Method method = Method::SausageGrid;
};

/// Measurements on a geometric epsilon ladder, largest epsilon first.
struct SausageProfile {
    std::vector<ProfileEntry> entries;
    std::string curve_ref;
    double nucleus_radius = 0.0;
};

struct DimensionReport {
    double dim_estimate = 0.0;  ///< clamped to [1, 2]
    double raw_dimension = 0.0;
    double std_error = 0.0;
    double eps_min = 0.0;
    double eps_max = 0.0;
    double r_squared = 0.0;
    std::size_t n_points = 0;
    Method method = Method::SausageGrid;
    FitModel model = FitModel::HeadCorrected;
    /// 2 - slope of the log-log line over the same window, for reference.
    double log_linear_dimension = 0.0;
    std::optional<double> predicted;
    std::optional<Verdict> verdict;
};

/// Area of the eps-neighborhood of the curve polyline measured on a grid of
/// spacing grid_factor * eps. With a nucleus radius, the closed disk of radius
/// max(nucleus, eps) is appended at the origin to stand in for the untraced
/// tail, contributing a disk of radius max(nucleus, eps) + eps.
/// Requires eps < diameter(curve).
double sausage_area(const PolarCurve& curve, double eps, double grid_factor = kDefaultGridFactor,
                    std::optional<double> nucleus_radius = std::nullopt);

/// Cells of the origin-anchored eps-mesh met by the polyline, plus those met
/// by the appended nucleus disk of radius max(nucleus, eps).
std::uint64_t box_count(const PolarCurve& curve, double eps,
                        std::optional<double> nucleus_radius = std::nullopt);

/// eps_max * 2^-k for every k with the rung >= eps_min. When the next halving
/// would undershoot, eps_min itself is appended provided its ratio to the
/// last rung stays in [0.4, 0.6].
std::vector<double> epsilon_ladder(double eps_max, double eps_min);

/// Measures the curve on the epsilon ladder. Throws TruncationError unless the
/// last full turn of the curve shrinks by at most half the smallest rung, so
/// the appended nucleus disk lies inside the true neighborhood of the tail.
SausageProfile build_profile(const PolarCurve& curve, double eps_max, double eps_min, Method method,
                             double grid_factor = kDefaultGridFactor);

struct PowerLinearFit {
    double exponent = 0.0;  ///< s in A eps^s + B eps
    double coef_power = 0.0;
    double coef_linear = 0.0;
    double exponent_stderr = 0.0;
    double r_squared = 0.0;
};

/// Least squares in relative residuals for area = A eps^s + B eps with
/// s in [0, 1]: A and B are solved exactly for each s, s by a scan, golden
/// section and Gauss-Newton polish. The standard error of s comes from the
/// curvature of the profiled residual sum. Requires at least four points.
PowerLinearFit fit_power_plus_linear(std::span<const double> eps, std::span<const double> area);

/// Dimension fit of the profile. Box counts N are fitted as the area
/// equivalents N eps^2, so both methods share the models.
DimensionReport fit_dimension(const SausageProfile& profile, WindowPolicy policy,
                              FitModel model = FitModel::HeadCorrected);

/// Sets predicted and verdict (MATCH iff |estimate - predicted| <= tolerance).
DimensionReport with_prediction(DimensionReport report, std::optional<double> predicted,
                                double tolerance = 0.05);

std::string method_name(Method m);
std::string verdict_name(Verdict v);
std::string policy_name(WindowPolicy p);
std::string model_name(FitModel m);

/// CSV "epsilon,area,method".
std::string profile_csv(const SausageProfile& profile);

} // namespace spiraldim
