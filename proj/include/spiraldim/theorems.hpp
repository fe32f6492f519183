#pragma once

#include "spiraldim/damping.hpp"
#include "spiraldim/ode_sim.hpp"
#include "spiraldim/polar_curve.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace spiraldim {

enum class Criterion {
    RectifiabilityDichotomy,
    PowerLawDimension,
    DimensionOne,
    SpiralCriterion,
    DerivativeCriterion,
    DimensionOneCriterion,
    DimensionOneDerivative,
};

enum class Status { Pass, Fail, Undetermined };
enum class Rectifiability { Rectifiable, NonRectifiable };

struct Hypothesis {
    std::string name;
    Status status = Status::Undetermined;
    /// Fitted constants and diagnostics, in insertion order.
    std::vector<std::pair<std::string, double>> witness;
};

/// Outcome of checking one theorem's hypotheses. The conclusion is set only
/// when every hypothesis passes.
struct CriterionReport {
    Criterion criterion = Criterion::PowerLawDimension;
    std::vector<Hypothesis> hypotheses;
    std::variant<std::monostate, double, Rectifiability> conclusion;

    bool all_pass() const;
    std::optional<double> dimension() const;
    std::optional<Rectifiability> rectifiability() const;
};

inline constexpr double kResidualThreshold = 0.5;
/// Largest log-log slope of t h(t) accepted as "no upward trend".
inline constexpr double kLimsupSlope = 0.02;
/// |alpha - 1| below this selects the dimension-one branch.
inline constexpr double kAlphaOneTolerance = 1e-3;
/// Witness ratios whose tail log-slope exceeds this are treated as unbounded.
inline constexpr double kTrendSlope = 0.1;

/// Dimension 2/(1+alpha) when H = 2 alpha log t + O(1) with alpha in (0,1)
/// and t h(t) bounded; dimension 1 when alpha = 1.
CriterionReport predict_dimension(const DampingSpec& spec, const AsymptoticFit& fit,
                                  double residual_threshold = kResidualThreshold);

/// Rectifiable iff the integral of exp(-H/2) converges, judged from the tail
/// power exponent of the integrand over the last decade before t_max.
CriterionReport classify_rectifiability(const DampingSpec& spec, double t_max);

/// Fit window used when only a horizon is known: the last three decades
/// before t_max, or everything from 10 t0 when that is shorter.
std::pair<double, double> default_fit_window(const DampingSpec& spec, double t_max);

/// Dimension implied by the damping alone: 1 for rectifiable solutions,
/// otherwise the predict_dimension conclusion, if any.
std::optional<double> predicted_dimension(const DampingSpec& spec, double t_max,
                                          double residual_threshold = kResidualThreshold);

/// Checks the lower bound, positive decrement bound and length bound for the
/// normal-form curve. alpha in (0,1) targets dimension 2/(1+alpha); alpha = 1
/// checks the dimension-one variant (upper bound m/phi, length M log phi).
/// Throws RangeError when the curve spans fewer than three turns.
CriterionReport check_spiral_criterion(const PolarCurve& curve, double alpha);

/// Derivative form of the criteria: -K phi^-(alpha+1) <= f' <= 0 (or -K/phi
/// for alpha = 1) with f' not identically zero on any turn.
CriterionReport check_derivative_criterion(const PolarCurve& curve, double alpha);

struct FBound {
    double m_bar = 0.0;
    bool holds = false;
};

/// Upper bound f <= m_bar phi^-alpha with the explicit constant
/// m_bar = a_bar M1 / (2 pi alpha), M1 = (1 + 2 pi / phi_1)^(alpha+1).
FBound validate_lemma_f_bound(const PolarCurve& curve, double alpha, double a_bar);

struct PolarOdeErrors {
    double max_rel_err_r = 0.0;
    double max_rel_err_theta = 0.0;
};

/// Compares numerically differentiated r and theta against
/// r' = -h r sin^2 theta and theta' = -1 - (h/2) sin 2 theta at random samples.
/// Derivatives come from central differences of the flow re-propagated a
/// short time either side of each probe, so they are independent of how the
/// trajectory itself was integrated.
PolarOdeErrors validate_polar_odes(const Trajectory& traj, const DampingSpec& damping,
                                   std::size_t n_probes, std::uint64_t seed = 0);

/// Angle offset added to phi by the curve checkers: 0 when the curve starts
/// at phi >= 1, otherwise the shift that moves its start to 2 pi.
double checker_phi_offset(const PolarCurve& curve);

std::string criterion_name(Criterion c);
std::string status_name(Status s);
std::string rectifiability_name(Rectifiability r);

} // namespace spiraldim
