#include "spiraldim/theorems.hpp"

#include "spiraldim/errors.hpp"
#include "spiraldim/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace spiraldim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kExponentOne = 1.0 + 1e-3;

Status finite_positive(double v) { return std::isfinite(v) && v > 0.0 ? Status::Pass : Status::Fail; }

/// Log-log slope of values against psi over the last decade of psi (the
/// upper half of the log range for shorter curves). NaN when a value in the
/// window is not positive.
double tail_log_slope(const std::vector<double>& psi, const std::vector<double>& values) {
    const double hi = psi.back();
    const double lo = std::max(psi.front(), std::min(hi / 10.0, std::sqrt(psi.front() * hi)));
    const auto first = static_cast<std::size_t>(std::lower_bound(psi.begin(), psi.end(), lo) - psi.begin());
    const std::size_t count = psi.size() - first;
    if (count < 3) {
        return kNaN;
    }
    const std::size_t stride = std::max<std::size_t>(1, count / 2000);
    std::vector<double> x, y;
    for (std::size_t k = first; k < psi.size(); k += stride) {
        if (!(values[k] > 0.0)) {
            return kNaN;
        }
        x.push_back(std::log(psi[k]));
        y.push_back(std::log(values[k]));
    }
    if (x.size() < 3) {
        return kNaN;
    }
    return fit_line(x, y).slope;
}

/// Applies the trend guard: a passing bound whose ratio keeps growing (or, for
/// lower bounds, shrinking) over the tail becomes UNDETERMINED.
void guard_trend(Hypothesis& h, double slope, bool lower_bound) {
    h.witness.emplace_back("tail_log_slope", slope);
    if (h.status != Status::Pass) {
        return;
    }
    const double s = lower_bound ? -slope : slope;
    if (!std::isfinite(slope) || s > kTrendSlope) {
        h.status = Status::Undetermined;
    }
}

/// Groups consecutive samples into full turns and keeps the maximum of each.
void per_turn_max(std::span<const double> phi, const std::vector<double>& psi, const std::vector<double>& v,
                  std::vector<double>& turn_psi, std::vector<double>& turn_max) {
    std::size_t k = 0;
    while (k < phi.size()) {
        const double end = phi[k] + kTwoPi;
        if (end > phi.back()) {
            break;
        }
        double m = -std::numeric_limits<double>::infinity();
        const double start = psi[k];
        while (k < phi.size() && phi[k] < end) {
            m = std::max(m, v[k]);
            ++k;
        }
        turn_psi.push_back(start);
        turn_max.push_back(m);
    }
}

void require_turns(const PolarCurve& curve, const char* who) {
    if (curve.phi_end() - curve.phi_begin() < 3.0 * kTwoPi) {
        throw RangeError(std::string(who) + ": curve spans fewer than three turns");
    }
}

std::vector<double> shifted_phi(const PolarCurve& curve, double offset) {
    std::vector<double> psi(curve.phi().begin(), curve.phi().end());
    for (double& p : psi) {
        p += offset;
    }
    return psi;
}

void finish(CriterionReport& report, std::variant<std::monostate, double, Rectifiability> conclusion) {
    if (report.all_pass()) {
        report.conclusion = conclusion;
    }
}

} // namespace

bool CriterionReport::all_pass() const {
    return std::all_of(hypotheses.begin(), hypotheses.end(),
                       [](const Hypothesis& h) { return h.status == Status::Pass; });
}

std::optional<double> CriterionReport::dimension() const {
    if (const auto* d = std::get_if<double>(&conclusion)) {
        return *d;
    }
    return std::nullopt;
}

std::optional<Rectifiability> CriterionReport::rectifiability() const {
    if (const auto* r = std::get_if<Rectifiability>(&conclusion)) {
        return *r;
    }
    return std::nullopt;
}

CriterionReport predict_dimension(const DampingSpec& spec, const AsymptoticFit& fit, double residual_threshold) {
    const double alpha = fit.alpha;
    const bool alpha_one = std::abs(alpha - 1.0) < kAlphaOneTolerance;

    CriterionReport report;
    report.criterion = alpha_one ? Criterion::DimensionOne : Criterion::PowerLawDimension;

    Hypothesis hw{"hw_condition", Status::Undetermined, {}};
    try {
        const IntegralVerdict v = check_hw_condition(spec, fit.t_hi);
        hw.witness = {{"integral", v.value}, {"tail_exponent", v.tail_exponent}};
        if (v.converged) {
            hw.status = Status::Pass;
        }
    } catch (const Error&) {
        hw.witness = {{"integral", kNaN}};
    }
    report.hypotheses.push_back(hw);

    Hypothesis log_form{"log_asymptotic_form", Status::Undetermined,
                        {{"alpha", alpha}, {"offset", fit.offset}, {"residual_sup", fit.residual_sup},
                         {"t_lo", fit.t_lo}, {"t_hi", fit.t_hi}}};
    if (std::isfinite(fit.residual_sup) && fit.residual_sup <= residual_threshold) {
        log_form.status = Status::Pass;
    }
    report.hypotheses.push_back(log_form);

    Hypothesis range{"alpha_in_range", Status::Undetermined, {{"alpha", alpha}}};
    if (alpha_one || (alpha > 0.0 && alpha < 1.0)) {
        range.status = Status::Pass;
    }
    report.hypotheses.push_back(range);

    if (!alpha_one) {
        // The t h(t) bound is only needed on the alpha < 1 branch.
        Hypothesis limsup{"limsup_t_h_finite", Status::Undetermined, {}};
        const double t_hi = fit.t_hi;
        const double t_lo = std::max(spec.t0(), t_hi / 100.0);
        if (t_hi > t_lo) {
            const auto ts = log_space(t_lo, t_hi, 64);
            std::vector<double> x, y;
            double sup = 0.0;
            bool positive = true;
            for (double t : ts) {
                const double th = t * eval_h(spec, t);
                positive = positive && th > 0.0;
                sup = std::max(sup, th);
                x.push_back(std::log(t));
                y.push_back(std::log(std::max(th, std::numeric_limits<double>::min())));
            }
            const double slope = fit_line(x, y).slope;
            limsup.witness = {{"t_h_sup", sup}, {"log_slope", slope}};
            if (positive && std::isfinite(sup) && slope <= kLimsupSlope) {
                limsup.status = Status::Pass;
            }
        }
        report.hypotheses.push_back(limsup);
    }

    finish(report, alpha_one ? 1.0 : 2.0 / (1.0 + alpha));
    return report;
}

CriterionReport classify_rectifiability(const DampingSpec& spec, double t_max) {
    CriterionReport report;
    report.criterion = Criterion::RectifiabilityDichotomy;
    const double t0 = spec.t0();
    if (!(t_max > t0) || t_max > spec.t_max()) {
        report.hypotheses.push_back({"horizon_valid", Status::Undetermined, {{"t_max", t_max}}});
        return report;
    }
    const double tail_lo = std::max(t0, t_max / 10.0);

    const double p_h = tail_power_exponent([&](double t) { return std::log(eval_h(spec, t)); }, tail_lo, t_max);
    Hypothesis divergent{"h_not_integrable", Status::Undetermined,
                         {{"H_t_max", eval_H(spec, t_max)}, {"tail_exponent", p_h}}};
    if (p_h <= kExponentOne) {
        divergent.status = Status::Pass;
    } else if (p_h > 1.0 + kTailMargin) {
        divergent.status = Status::Fail;
    }
    report.hypotheses.push_back(divergent);

    const IntegralVerdict hw_v = check_hw_condition(spec, t_max);
    Hypothesis hw{"hw_condition", Status::Undetermined,
                  {{"integral", hw_v.value}, {"tail_exponent", hw_v.tail_exponent}}};
    if (hw_v.converged) {
        hw.status = Status::Pass;
    } else if (hw_v.tail_exponent <= kExponentOne) {
        hw.status = Status::Fail;
    }
    report.hypotheses.push_back(hw);

    const double integral = integrate([&](double t) { return std::exp(-0.5 * eval_H(spec, t)); }, t0, t_max);
    const double p = tail_power_exponent([&](double t) { return -0.5 * eval_H(spec, t); }, tail_lo, t_max);
    Hypothesis tail{"length_integral_tail_decisive", Status::Undetermined,
                    {{"integral", integral}, {"tail_exponent", p}}};
    std::variant<std::monostate, double, Rectifiability> verdict;
    if (p > 1.0 + kTailMargin) {
        tail.status = Status::Pass;
        verdict = Rectifiability::Rectifiable;
    } else if (p <= kExponentOne) {
        tail.status = Status::Pass;
        verdict = Rectifiability::NonRectifiable;
    }
    report.hypotheses.push_back(tail);

    finish(report, verdict);
    return report;
}

std::pair<double, double> default_fit_window(const DampingSpec& spec, double t_max) {
    const double lo = std::max(10.0 * spec.t0(), t_max * 1e-3);
    return {lo, t_max};
}

std::optional<double> predicted_dimension(const DampingSpec& spec, double t_max, double residual_threshold) {
    const CriterionReport rect = classify_rectifiability(spec, t_max);
    if (rect.rectifiability() == Rectifiability::Rectifiable) {
        return 1.0;
    }
    const auto [lo, hi] = default_fit_window(spec, t_max);
    const AsymptoticFit fit = fit_alpha(spec, lo, hi);
    return predict_dimension(spec, fit, residual_threshold).dimension();
}

double checker_phi_offset(const PolarCurve& curve) {
    return curve.phi_begin() >= 1.0 ? 0.0 : kTwoPi - curve.phi_begin();
}

CriterionReport check_spiral_criterion(const PolarCurve& curve, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("check_spiral_criterion: alpha must lie in (0, 1]");
    }
    require_turns(curve, "check_spiral_criterion");
    const bool dim_one = alpha == 1.0;
    const double offset = checker_phi_offset(curve);
    const auto phi = curve.phi();
    const auto f = curve.f();
    const auto psi = shifted_phi(curve, offset);
    const std::size_t n = psi.size();

    CriterionReport report;
    report.criterion = dim_one ? Criterion::DimensionOneCriterion : Criterion::SpiralCriterion;

    report.hypotheses.push_back({"monotone_certified", curve.monotone_certified() ? Status::Pass : Status::Fail,
                                 {{"phi_start", curve.phi_begin()}, {"phi_offset", offset}}});

    // Amplitude bound: below by m phi^-alpha, or above by m phi^-1.
    std::vector<double> scaled(n);
    for (std::size_t k = 0; k < n; ++k) {
        scaled[k] = std::pow(psi[k], dim_one ? 1.0 : alpha) * f[k];
    }
    if (dim_one) {
        const double m_bar = *std::max_element(scaled.begin(), scaled.end());
        Hypothesis h{"amplitude_upper_bound", finite_positive(m_bar), {{"m_bar", m_bar}}};
        guard_trend(h, tail_log_slope(psi, scaled), false);
        report.hypotheses.push_back(h);
        report.hypotheses.push_back({"phi1_above_one", psi.front() > 1.0 ? Status::Pass : Status::Fail,
                                     {{"phi1", psi.front()}}});
    } else {
        const double m_low = *std::min_element(scaled.begin(), scaled.end());
        Hypothesis h{"amplitude_lower_bound", finite_positive(m_low), {{"m_low", m_low}}};
        guard_trend(h, tail_log_slope(psi, scaled), true);
        report.hypotheses.push_back(h);
    }

    // Turn decrements f(phi) - f(phi + 2 pi).
    std::vector<double> dec_psi, dec_scaled;
    double min_dec = std::numeric_limits<double>::infinity();
    double a_bar = 0.0;
    for (std::size_t k = 0; k < n && phi[k] + kTwoPi <= curve.phi_end(); ++k) {
        const double d = turn_decrement(curve, phi[k]);
        min_dec = std::min(min_dec, d);
        const double s = std::pow(psi[k], alpha + 1.0) * d;
        a_bar = std::max(a_bar, s);
        dec_psi.push_back(psi[k]);
        dec_scaled.push_back(s);
    }
    {
        Hypothesis h{dim_one ? "decrement_positive" : "decrement_bound", Status::Fail,
                     {{"min_decrement", min_dec}}};
        if (!dim_one) {
            h.witness.emplace_back("a_bar", a_bar);
        }
        if (min_dec > 0.0 && std::isfinite(a_bar)) {
            h.status = Status::Pass;
        }
        if (!dim_one) {
            guard_trend(h, tail_log_slope(dec_psi, dec_scaled), false);
        }
        report.hypotheses.push_back(h);
    }

    // Length bound: length(phi1, phi) <= M phi^(1-alpha), or M log phi.
    const auto cum = curve.cumulative_length();
    double big_m = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        const double g = dim_one ? std::log(psi[k]) : std::pow(psi[k], 1.0 - alpha);
        if (g > 0.0) {
            big_m = std::max(big_m, cum[k] / g);
        }
    }
    std::vector<double> turn_psi, turn_len;
    for (std::size_t k = 0; k < n && phi[k] + kTwoPi <= curve.phi_end(); k += 1) {
        turn_psi.push_back(psi[k]);
        turn_len.push_back(std::pow(psi[k], alpha) * arc_length(curve, phi[k], phi[k] + kTwoPi));
    }
    {
        Hypothesis h{"length_bound", finite_positive(big_m), {{"M", big_m}}};
        guard_trend(h, tail_log_slope(turn_psi, turn_len), false);
        report.hypotheses.push_back(h);
    }

    finish(report, dim_one ? 1.0 : 2.0 / (1.0 + alpha));
    return report;
}

CriterionReport check_derivative_criterion(const PolarCurve& curve, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("check_derivative_criterion: alpha must lie in (0, 1]");
    }
    require_turns(curve, "check_derivative_criterion");
    const bool dim_one = alpha == 1.0;
    const double offset = checker_phi_offset(curve);
    const auto phi = curve.phi();
    const auto f = curve.f();
    const auto psi = shifted_phi(curve, offset);
    const auto df = curve.derivative();
    const std::size_t n = psi.size();
    const double f_max = *std::max_element(f.begin(), f.end());

    CriterionReport report;
    report.criterion = dim_one ? Criterion::DimensionOneDerivative : Criterion::DerivativeCriterion;

    const double df_max = *std::max_element(df.begin(), df.end());
    report.hypotheses.push_back({"derivative_nonpositive", df_max <= 1e-12 * f_max ? Status::Pass : Status::Fail,
                                 {{"max_f_prime", df_max}, {"phi_offset", offset}}});

    // Every window [phi, phi + 2 pi) must contain a sample with |f'| above the threshold.
    {
        const double threshold = 1e-10 * f_max;
        std::vector<std::size_t> active(n + 1, 0);
        for (std::size_t k = 0; k < n; ++k) {
            active[k + 1] = active[k] + (std::abs(df[k]) > threshold ? 1 : 0);
        }
        bool ok = true;
        double worst_phi = kNaN;
        std::size_t hi = 0;
        for (std::size_t k = 0; k < n && phi[k] + kTwoPi <= curve.phi_end(); ++k) {
            while (hi < n && phi[hi] < phi[k] + kTwoPi) {
                ++hi;
            }
            if (active[hi] == active[k]) {
                ok = false;
                worst_phi = phi[k];
                break;
            }
        }
        Hypothesis h{"derivative_not_identically_zero", ok ? Status::Pass : Status::Fail,
                     {{"threshold", threshold}}};
        if (!ok) {
            h.witness.emplace_back("flat_turn_start", worst_phi);
        }
        report.hypotheses.push_back(h);
    }

    {
        std::vector<double> scaled(n);
        for (std::size_t k = 0; k < n; ++k) {
            scaled[k] = -std::pow(psi[k], dim_one ? 1.0 : alpha + 1.0) * df[k];
        }
        const double big_k = *std::max_element(scaled.begin(), scaled.end());
        std::vector<double> turn_psi, turn_max;
        per_turn_max(phi, psi, scaled, turn_psi, turn_max);
        Hypothesis h{"derivative_lower_bound", finite_positive(big_k), {{"K", big_k}}};
        guard_trend(h, turn_psi.size() >= 3 ? tail_log_slope(turn_psi, turn_max) : kNaN, false);
        report.hypotheses.push_back(h);
    }

    std::vector<double> scaled(n);
    for (std::size_t k = 0; k < n; ++k) {
        scaled[k] = std::pow(psi[k], dim_one ? 1.0 : alpha) * f[k];
    }
    if (dim_one) {
        const double m_bar = *std::max_element(scaled.begin(), scaled.end());
        Hypothesis h{"amplitude_upper_bound", finite_positive(m_bar), {{"m_bar", m_bar}}};
        guard_trend(h, tail_log_slope(psi, scaled), false);
        report.hypotheses.push_back(h);
        report.hypotheses.push_back({"phi1_above_one", psi.front() > 1.0 ? Status::Pass : Status::Fail,
                                     {{"phi1", psi.front()}}});
    } else {
        const double m_low = *std::min_element(scaled.begin(), scaled.end());
        Hypothesis h{"amplitude_lower_bound", finite_positive(m_low), {{"m_low", m_low}}};
        guard_trend(h, tail_log_slope(psi, scaled), true);
        report.hypotheses.push_back(h);
    }

    finish(report, dim_one ? 1.0 : 2.0 / (1.0 + alpha));
    return report;
}

FBound validate_lemma_f_bound(const PolarCurve& curve, double alpha, double a_bar) {
    if (!(alpha > 0.0) || !(a_bar > 0.0)) {
        return {};
    }
    const double offset = checker_phi_offset(curve);
    const auto phi = curve.phi();
    const auto f = curve.f();
    const double phi1 = phi.front() + offset;
    const double m1 = std::pow(1.0 + kTwoPi / phi1, alpha + 1.0);
    FBound out;
    out.m_bar = a_bar * m1 / (kTwoPi * alpha);
    out.holds = true;
    for (std::size_t k = 0; k < phi.size(); ++k) {
        const double bound = out.m_bar * std::pow(phi[k] + offset, -alpha);
        if (f[k] > bound * (1.0 + 1e-12)) {
            out.holds = false;
            break;
        }
    }
    return out;
}

PolarOdeErrors validate_polar_odes(const Trajectory& traj, const DampingSpec& damping, std::size_t n_probes,
                                   std::uint64_t seed) {
    using State = std::array<double, 2>;
    constexpr double kDelta = 1e-3;
    constexpr int kSubsteps = 8;

    auto rhs = [&](double t, const State& s) -> State { return {s[1], -s[0] - eval_h(damping, t) * s[1]}; };
    auto propagate = [&](double t, State s, double span) {
        const double dt = span / kSubsteps;
        for (int i = 0; i < kSubsteps; ++i) {
            const State k1 = rhs(t, s);
            const State k2 = rhs(t + dt / 2, {s[0] + dt / 2 * k1[0], s[1] + dt / 2 * k1[1]});
            const State k3 = rhs(t + dt / 2, {s[0] + dt / 2 * k2[0], s[1] + dt / 2 * k2[1]});
            const State k4 = rhs(t + dt, {s[0] + dt * k3[0], s[1] + dt * k3[1]});
            s[0] += dt / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
            s[1] += dt / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
            t += dt;
        }
        return s;
    };

    std::vector<std::size_t> candidates;
    const auto& s = traj.samples;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        if (s[i].t - kDelta > damping.t0() && s[i].t + kDelta <= damping.t_max()) {
            candidates.push_back(i);
        }
    }
    PolarOdeErrors out;
    if (candidates.empty() || n_probes == 0) {
        return out;
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    for (std::size_t p = 0; p < n_probes; ++p) {
        const StateSample& q = s[candidates[pick(rng)]];
        const State fwd = propagate(q.t, {q.x, q.y}, kDelta);
        const State bwd = propagate(q.t, {q.x, q.y}, -kDelta);
        const double r_fd = (std::hypot(fwd[0], fwd[1]) - std::hypot(bwd[0], bwd[1])) / (2 * kDelta);
        const double dtheta = std::remainder(std::atan2(fwd[1], fwd[0]) - std::atan2(bwd[1], bwd[0]), kTwoPi);
        const double theta_fd = dtheta / (2 * kDelta);

        const double r = std::hypot(q.x, q.y);
        const double theta = std::atan2(q.y, q.x);
        const double h = eval_h(damping, q.t);
        const double sn = std::sin(theta);
        const double r_rhs = -h * r * sn * sn;
        const double theta_rhs = -1.0 - 0.5 * h * std::sin(2.0 * theta);

        out.max_rel_err_r = std::max(out.max_rel_err_r, std::abs(r_fd - r_rhs) / std::max(std::abs(r_rhs), h * r));
        out.max_rel_err_theta =
            std::max(out.max_rel_err_theta, std::abs(theta_fd - theta_rhs) / std::max(std::abs(theta_rhs), 1.0));
    }
    return out;
}

std::string criterion_name(Criterion c) {
    switch (c) {
        case Criterion::RectifiabilityDichotomy: return "RectifiabilityDichotomy";
        case Criterion::PowerLawDimension: return "PowerLawDimension";
        case Criterion::DimensionOne: return "DimensionOne";
        case Criterion::SpiralCriterion: return "SpiralCriterion";
        case Criterion::DerivativeCriterion: return "DerivativeCriterion";
        case Criterion::DimensionOneCriterion: return "DimensionOneCriterion";
        case Criterion::DimensionOneDerivative: return "DimensionOneDerivative";
    }
    return "unknown";
}

std::string status_name(Status s) {
    switch (s) {
        case Status::Pass: return "PASS";
        case Status::Fail: return "FAIL";
        case Status::Undetermined: return "UNDETERMINED";
    }
    return "UNDETERMINED";
}

std::string rectifiability_name(Rectifiability r) {
    return r == Rectifiability::Rectifiable ? "RECTIFIABLE" : "NON_RECTIFIABLE";
}

} // namespace spiraldim
