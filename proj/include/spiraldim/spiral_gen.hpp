#pragma once

#include "spiraldim/polar_curve.hpp"

#include <variant>

namespace spiraldim {

/// f(phi) = phi^-alpha.
struct PowerSpiral {
    double alpha = 0.5;
};

/// f(phi) = scale * phi^-alpha.
struct ScaledPowerSpiral {
    double scale = 1.0;
    double alpha = 0.5;
};

/// f(phi) = exp(-rate * phi); finite length.
struct ExpSpiral {
    double rate = 0.1;
};

using SpiralKind = std::variant<PowerSpiral, ScaledPowerSpiral, ExpSpiral>;

class SpiralSpec {
public:
    /// Throws SpecError unless alpha in (0, 1], scale and rate positive,
    /// 0 < phi1 < phi2, and phi1 > 1 when alpha = 1.
    SpiralSpec(SpiralKind kind, double phi1, double phi2);

    const SpiralKind& kind() const { return kind_; }
    double phi1() const { return phi1_; }
    double phi2() const { return phi2_; }

    double amplitude(double phi) const;
    double amplitude_derivative(double phi) const;
    std::string describe() const;

private:
    SpiralKind kind_;
    double phi1_;
    double phi2_;
};

/// Samples the amplitude on the uniform grid phi1 + k * step, k = 0.. while
/// <= phi2. Requires 0 < step <= pi/16.
PolarCurve generate(const SpiralSpec& spec, double grid_step);

/// 2/(1+alpha) for power spirals with alpha < 1, otherwise 1.
double known_dimension(const SpiralSpec& spec);

} // namespace spiraldim
