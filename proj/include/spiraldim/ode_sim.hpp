#pragma once

#include "spiraldim/damping.hpp"
#include "spiraldim/numerics.hpp"

#include <string>
#include <variant>
#include <vector>

namespace spiraldim {

/// x' = y, y' = -x - h(t) y.
struct DampedOscillator {
    DampingSpec damping;
};

/// x' = y, y' = -(1 - nu^2/t^2) x - ((2 - mu)/t) y, singular at t = 0.
struct BesselSystem {
    double mu = 1.0;
    double nu = 0.0;
    double t0 = 1.0;
};

class SystemSpec {
public:
    static SystemSpec damped(DampingSpec damping);
    static SystemSpec bessel(double mu, double nu, double t0);

    const std::variant<DampedOscillator, BesselSystem>& kind() const { return kind_; }
    double domain_start() const;
    /// Damping term of the system as a DampingSpec (BesselStyle for Bessel).
    DampingSpec damping() const;
    /// Upper bound on |theta'| at time t, used to place output samples.
    double angular_speed_bound(double t) const;

private:
    explicit SystemSpec(std::variant<DampedOscillator, BesselSystem> kind) : kind_(std::move(kind)) {}
    std::variant<DampedOscillator, BesselSystem> kind_;
};

struct StateSample {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
};

struct Tolerances {
    double rel = 1e-9;
    double abs = 1e-12;
};

inline constexpr double kDefaultMaxAngleStep = kPi / 16.0;

/// Time-ordered solution samples. Consecutive samples differ in polar angle by
/// at most max_angle_step and never sit at the origin.
struct Trajectory {
    std::vector<StateSample> samples;
    double t_start = 0.0;
    double t_end = 0.0;
    Tolerances tolerances;
    double max_angle_step = kDefaultMaxAngleStep;
    std::string source = "trajectory";

    double final_radius() const;
};

Trajectory integrate(const SystemSpec& sys, StateSample init, double t_end,
                     Tolerances tol = {}, double max_angle_step = kDefaultMaxAngleStep);

/// Unwrapped polar angle theta(t) at every sample, starting in (-pi, pi].
std::vector<double> unwrapped_angle(const Trajectory& traj);

/// Index of the first sample after which theta is strictly decreasing to the
/// end of the trajectory; equals samples.size() - 1 when it never settles.
std::size_t rotation_onset(const Trajectory& traj);

/// Polyline length of the (x, y) samples.
double trajectory_length(const Trajectory& traj);

struct EnergyEstimate {
    double c_estimate = 0.0;      ///< e^{H} r^2 at t_end
    double delta_sup_tail = 0.0;  ///< max |e^{H} r^2 - C| over the last quarter
};

EnergyEstimate energy_constant(const Trajectory& traj, const DampingSpec& damping);

/// CSV with header "t,x,y" and 17 significant digits.
void write_trajectory_csv(const Trajectory& traj, const std::string& path);
std::string trajectory_csv(const Trajectory& traj);
Trajectory read_trajectory_csv(const std::string& path);

} // namespace spiraldim
