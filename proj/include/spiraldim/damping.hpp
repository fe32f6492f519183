#pragma once

#include "spiraldim/interpolation.hpp"

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace spiraldim {

/// h(t) = lambda * t^-gamma.
struct PowerLaw {
    double lambda = 1.0;
    double gamma = 1.0;
};

/// Damping of the generalized Bessel system: h(t) = (2 - mu) / t. The nu
/// parameter only enters the restoring force and is carried for bookkeeping.
struct BesselStyle {
    double mu = 1.0;
    double nu = 0.0;
};

struct Knot {
    double t = 0.0;
    double h = 0.0;
};

/// Tabulated h(t), interpolated by a shape-preserving cubic.
struct Sampled {
    std::vector<Knot> knots;
};

using DampingKind = std::variant<PowerLaw, BesselStyle, Sampled>;

/// The damping coefficient h(t) > 0 on [t0, infinity) and its antiderivative
/// H(t) from t0. Immutable after construction.
class DampingSpec {
public:
    static DampingSpec power_law(double lambda, double gamma, double t0 = 1.0);
    static DampingSpec bessel(double mu, double nu, double t0 = 1.0);
    static DampingSpec sampled(std::vector<Knot> knots);
    /// t0 must not precede the first knot.
    static DampingSpec sampled(std::vector<Knot> knots, double t0);

    const DampingKind& kind() const { return kind_; }
    double t0() const { return t0_; }
    /// Upper end of the domain: infinity for analytic kinds, last knot otherwise.
    double t_max() const;
    bool is_sampled() const { return std::holds_alternative<Sampled>(kind_); }
    /// Knot abscissae where h is only piecewise C1 (empty for analytic kinds).
    std::vector<double> derivative_breaks() const;

    std::string describe() const;

private:
    DampingSpec(DampingKind kind, double t0);

    DampingKind kind_;
    double t0_ = 1.0;
    std::shared_ptr<const MonotoneCubic> interp_;  // Sampled only
    std::vector<double> cumulative_;               // H at knots, Sampled only

    friend double eval_h(const DampingSpec&, double);
    friend double eval_dh(const DampingSpec&, double);
    friend double eval_H(const DampingSpec&, double);
};

double eval_h(const DampingSpec& spec, double t);
/// h'(t): analytic for PowerLaw/BesselStyle, spline derivative for Sampled.
double eval_dh(const DampingSpec& spec, double t);
double eval_H(const DampingSpec& spec, double t);

/// H(t) ~ 2 alpha log t + offset over a window, with the sup residual.
struct AsymptoticFit {
    double alpha = 0.0;
    double offset = 0.0;
    double residual_sup = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
};

AsymptoticFit fit_alpha(const DampingSpec& spec, double t_lo, double t_hi,
                        std::size_t n_samples = 64);

struct IntegralVerdict {
    double value = 0.0;
    bool converged = false;
    double tail_exponent = 0.0;  ///< p in integrand ~ t^-p over the last decade
};

/// Tail exponent must exceed 1 by this margin for a convergence verdict.
inline constexpr double kTailMargin = 0.05;

/// Integral of |2h' + h^2| over [t0, t_max] plus a tail-decay convergence verdict.
IntegralVerdict check_hw_condition(const DampingSpec& spec, double t_max);

/// Parses the key-value section kind=, lambda=, gamma=, mu=, nu=, t0=,
/// knots=. Relative knot paths resolve against base_dir.
DampingSpec damping_from_config(const std::map<std::string, std::string>& kv,
                                const std::string& base_dir = {});

/// Two-column t,h CSV, header optional.
std::vector<Knot> read_knots_csv(const std::string& path);

} // namespace spiraldim
