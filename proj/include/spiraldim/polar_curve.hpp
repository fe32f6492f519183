#pragma once

#include "spiraldim/damping.hpp"
#include "spiraldim/interpolation.hpp"
#include "spiraldim/numerics.hpp"
#include "spiraldim/ode_sim.hpp"

#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace spiraldim {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// A spiral in normal form r = f(phi) with phi the clockwise winding angle.
///
/// Samples are strictly increasing in phi with f > 0. Between samples the
/// amplitude is a monotone cubic in phi, while geometric queries (arc length,
/// sausage area, box counts) use the polyline through the sampled points.
class PolarCurve {
public:
    PolarCurve(std::vector<double> phi, std::vector<double> f, std::string source,
               bool mirrored = true);

    std::span<const double> phi() const { return phi_; }
    std::span<const double> f() const { return f_; }
    std::size_t size() const { return phi_.size(); }
    double phi_begin() const { return phi_.front(); }
    double phi_end() const { return phi_.back(); }
    const std::string& source() const { return source_; }

    /// f is nonincreasing across samples up to a relative 1e-12 slack.
    bool monotone_certified() const { return monotone_; }
    /// True when points() is the normal-form curve (f cos phi, f sin phi); false
    /// when it reproduces the original trajectory orientation (x, y).
    bool mirrored() const { return mirrored_; }

    /// Time at which the analysed tail begins, when the curve came from a
    /// trajectory (NaN otherwise).
    double onset_time() const { return onset_time_; }
    void set_onset_time(double t) { onset_time_ = t; }

    /// Interpolated amplitude; throws RangeError outside [phi_begin, phi_end].
    double value_at(double phi) const;

    /// Central-difference f' at every sample (one-sided at both ends).
    std::vector<double> derivative() const;

    std::vector<Point2> points() const;

    /// Prefix sums of polyline segment lengths; element k is the length up to sample k.
    std::span<const double> cumulative_length() const { return cumulative_; }

private:
    std::vector<double> phi_;
    std::vector<double> f_;
    std::string source_;
    bool mirrored_ = true;
    bool monotone_ = false;
    double onset_time_;
    std::shared_ptr<const MonotoneCubic> interp_;
    std::vector<double> cumulative_;
};

/// Default spacing of the uniform phi grid produced by to_polar.
inline constexpr double kDefaultPolarStep = kPi / 32.0;

/// A turn with theta' >= -kMinAngularRate anywhere resets monotone certification.
inline constexpr double kMinAngularRate = 0.1;
inline constexpr double kCertifiedTurns = 4.0;

/// Converts a trajectory into the normal form f(phi), phi = -theta, dropping
/// everything before certified clockwise rotation. Throws NotSpiralError when
/// fewer than four certified turns remain.
PolarCurve to_polar(const Trajectory& traj, bool mirror = true, double grid_step = kDefaultPolarStep);

/// Length of the polyline between phi_a and phi_b, where the polyline is
/// parametrized linearly in phi between samples. Exactly additive in the split point.
double arc_length(const PolarCurve& curve, double phi_a, double phi_b);

/// f(phi) - f(phi + 2 pi).
double turn_decrement(const PolarCurve& curve, double phi);

/// Largest distance between two sample points.
double diameter(const PolarCurve& curve);
double diameter(std::span<const Point2> pts);

struct PhiDerivative {
    double phi = 0.0;
    double f_prime = 0.0;
};

/// f'(phi) = -r'/theta' evaluated from the equations of motion at every sample
/// of the trajectory's certified tail.
std::vector<PhiDerivative> ode_f_prime(const Trajectory& traj, const DampingSpec& damping);

/// CSV "phi,f" with 17 significant digits.
std::string polar_curve_csv(const PolarCurve& curve);
void write_polar_curve_csv(const PolarCurve& curve, const std::string& path);
PolarCurve read_polar_curve_csv(const std::string& path);

} // namespace spiraldim
