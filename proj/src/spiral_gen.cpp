#include "spiraldim/spiral_gen.hpp"

#include "spiraldim/errors.hpp"

#include <cmath>
#include <sstream>

namespace spiraldim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_alpha(double alpha, double phi1) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw SpecError("spiral: alpha must lie in (0, 1]");
    }
    if (alpha == 1.0 && !(phi1 > 1.0)) {
        throw SpecError("spiral: alpha = 1 requires phi1 > 1");
    }
}

} // namespace

SpiralSpec::SpiralSpec(SpiralKind kind, double phi1, double phi2) : kind_(kind), phi1_(phi1), phi2_(phi2) {
    if (!(phi1 > 0.0) || !(phi2 > phi1) || !std::isfinite(phi2)) {
        throw SpecError("spiral: need 0 < phi1 < phi2 < inf");
    }
    std::visit(overloaded{
                   [&](const PowerSpiral& p) { check_alpha(p.alpha, phi1); },
                   [&](const ScaledPowerSpiral& p) {
                       if (!(p.scale > 0.0)) {
                           throw SpecError("spiral: scale must be positive");
                       }
                       check_alpha(p.alpha, phi1);
                   },
                   [&](const ExpSpiral& e) {
                       if (!(e.rate > 0.0)) {
                           throw SpecError("spiral: rate must be positive");
                       }
                   },
               },
               kind_);
}

double SpiralSpec::amplitude(double phi) const {
    return std::visit(overloaded{
                          [&](const PowerSpiral& p) { return std::pow(phi, -p.alpha); },
                          [&](const ScaledPowerSpiral& p) { return p.scale * std::pow(phi, -p.alpha); },
                          [&](const ExpSpiral& e) { return std::exp(-e.rate * phi); },
                      },
                      kind_);
}

double SpiralSpec::amplitude_derivative(double phi) const {
    return std::visit(overloaded{
                          [&](const PowerSpiral& p) { return -p.alpha * std::pow(phi, -p.alpha - 1.0); },
                          [&](const ScaledPowerSpiral& p) {
                              return -p.alpha * p.scale * std::pow(phi, -p.alpha - 1.0);
                          },
                          [&](const ExpSpiral& e) { return -e.rate * std::exp(-e.rate * phi); },
                      },
                      kind_);
}

std::string SpiralSpec::describe() const {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const PowerSpiral& p) { os << "power(alpha=" << p.alpha << ")"; },
                   [&](const ScaledPowerSpiral& p) { os << "scaled(scale=" << p.scale << ", alpha=" << p.alpha << ")"; },
                   [&](const ExpSpiral& e) { os << "exp(rate=" << e.rate << ")"; },
               },
               kind_);
    os << " phi in [" << phi1_ << ", " << phi2_ << "]";
    return os.str();
}

PolarCurve generate(const SpiralSpec& spec, double grid_step) {
    if (!(grid_step > 0.0 && grid_step <= kPi / 16.0 * (1.0 + 1e-12))) {
        throw SpecError("generate: grid step must lie in (0, pi/16]");
    }
    const auto n = static_cast<std::size_t>(std::floor((spec.phi2() - spec.phi1()) / grid_step * (1.0 + 1e-14))) + 1;
    std::vector<double> phi(n), f(n);
    for (std::size_t k = 0; k < n; ++k) {
        phi[k] = spec.phi1() + static_cast<double>(k) * grid_step;
        f[k] = spec.amplitude(phi[k]);
    }
    return PolarCurve(std::move(phi), std::move(f), "generator:" + spec.describe());
}

double known_dimension(const SpiralSpec& spec) {
    return std::visit(overloaded{
                          [](const PowerSpiral& p) { return p.alpha < 1.0 ? 2.0 / (1.0 + p.alpha) : 1.0; },
                          [](const ScaledPowerSpiral& p) { return p.alpha < 1.0 ? 2.0 / (1.0 + p.alpha) : 1.0; },
                          [](const ExpSpiral&) { return 1.0; },
                      },
                      spec.kind());
}

} // namespace spiraldim
