#include "spiraldim/damping.hpp"

#include "spiraldim/config.hpp"
#include "spiraldim/errors.hpp"
#include "spiraldim/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace spiraldim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_domain(const DampingSpec& spec, double t) {
    if (!(t >= spec.t0())) {
        std::ostringstream os;
        os << "t = " << t << " precedes t0 = " << spec.t0();
        throw DomainError(os.str());
    }
    if (t > spec.t_max()) {
        std::ostringstream os;
        os << "t = " << t << " beyond last knot " << spec.t_max();
        throw DomainError(os.str());
    }
}

} // namespace

DampingSpec::DampingSpec(DampingKind kind, double t0) : kind_(std::move(kind)), t0_(t0) {}

DampingSpec DampingSpec::power_law(double lambda, double gamma, double t0) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw SpecError("power law: lambda must be positive");
    }
    if (!std::isfinite(gamma) || !std::isfinite(t0)) {
        throw SpecError("power law: gamma and t0 must be finite");
    }
    if (gamma > 0.0 && !(t0 > 0.0)) {
        throw SpecError("power law: t0 must be positive when gamma > 0");
    }
    if (gamma != 0.0 && t0 < 0.0) {
        throw SpecError("power law: t0 must be nonnegative for non-integer powers");
    }
    return DampingSpec(PowerLaw{lambda, gamma}, t0);
}

DampingSpec DampingSpec::bessel(double mu, double nu, double t0) {
    if (!(mu < 2.0)) {
        throw SpecError("bessel: damping (2 - mu)/t is positive only for mu < 2");
    }
    if (!(t0 > 0.0)) {
        throw SpecError("bessel: t0 must be positive");
    }
    return DampingSpec(BesselStyle{mu, nu}, t0);
}

DampingSpec DampingSpec::sampled(std::vector<Knot> knots) {
    if (knots.empty()) {
        throw SpecError("sampled: no knots");
    }
    const double t0 = knots.front().t;
    return sampled(std::move(knots), t0);
}

DampingSpec DampingSpec::sampled(std::vector<Knot> knots, double t0) {
    if (knots.size() < 2) {
        throw SpecError("sampled: need at least two knots");
    }
    std::vector<double> ts, hs;
    ts.reserve(knots.size());
    hs.reserve(knots.size());
    for (const auto& k : knots) {
        if (!(k.h > 0.0)) {
            throw PositivityError("sampled: every knot value h must be positive");
        }
        if (!ts.empty() && !(k.t > ts.back())) {
            throw SpecError("sampled: knot times must be strictly increasing");
        }
        ts.push_back(k.t);
        hs.push_back(k.h);
    }
    if (t0 < ts.front() || t0 >= ts.back()) {
        throw SpecError("sampled: t0 must lie inside the knot range");
    }
    DampingSpec spec(Sampled{std::move(knots)}, t0);
    spec.interp_ = std::make_shared<const MonotoneCubic>(std::move(ts), std::move(hs));

    const auto xs = spec.interp_->knots_x();
    spec.cumulative_.assign(xs.size(), 0.0);
    for (std::size_t k = 1; k < xs.size(); ++k) {
        spec.cumulative_[k] = spec.cumulative_[k - 1] + spec.interp_->integral(xs[k - 1], xs[k]);
    }
    return spec;
}

double DampingSpec::t_max() const {
    if (const auto* s = std::get_if<Sampled>(&kind_)) {
        return s->knots.back().t;
    }
    return std::numeric_limits<double>::infinity();
}

std::vector<double> DampingSpec::derivative_breaks() const {
    std::vector<double> out;
    if (const auto* s = std::get_if<Sampled>(&kind_)) {
        for (const auto& k : s->knots) {
            out.push_back(k.t);
        }
    }
    return out;
}

std::string DampingSpec::describe() const {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const PowerLaw& p) { os << "powerlaw(lambda=" << p.lambda << ", gamma=" << p.gamma << ")"; },
                   [&](const BesselStyle& b) { os << "bessel(mu=" << b.mu << ", nu=" << b.nu << ")"; },
                   [&](const Sampled& s) { os << "sampled(" << s.knots.size() << " knots)"; },
               },
               kind_);
    os << " t0=" << t0_;
    return os.str();
}

double eval_h(const DampingSpec& spec, double t) {
    require_domain(spec, t);
    const double h = std::visit(overloaded{
                                    [&](const PowerLaw& p) { return p.lambda * std::pow(t, -p.gamma); },
                                    [&](const BesselStyle& b) { return (2.0 - b.mu) / t; },
                                    [&](const Sampled&) { return (*spec.interp_)(t); },
                                },
                                spec.kind_);
    if (!(h > 0.0)) {
        throw PositivityError("h(t) is not positive");
    }
    return h;
}

double eval_dh(const DampingSpec& spec, double t) {
    require_domain(spec, t);
    return std::visit(overloaded{
                          [&](const PowerLaw& p) { return -p.gamma * p.lambda * std::pow(t, -p.gamma - 1.0); },
                          [&](const BesselStyle& b) { return -(2.0 - b.mu) / (t * t); },
                          [&](const Sampled&) { return spec.interp_->derivative(t); },
                      },
                      spec.kind_);
}

double eval_H(const DampingSpec& spec, double t) {
    require_domain(spec, t);
    const double t0 = spec.t0();
    return std::visit(overloaded{
                          [&](const PowerLaw& p) {
                              if (p.gamma == 1.0) {
                                  return p.lambda * std::log(t / t0);
                              }
                              const double e = 1.0 - p.gamma;
                              return p.lambda / e * (std::pow(t, e) - std::pow(t0, e));
                          },
                          [&](const BesselStyle& b) { return (2.0 - b.mu) * std::log(t / t0); },
                          [&](const Sampled&) {
                              const auto xs = spec.interp_->knots_x();
                              auto locate = [&](double s) {
                                  auto it = std::upper_bound(xs.begin(), xs.end(), s);
                                  std::size_t k = static_cast<std::size_t>(it - xs.begin());
                                  return std::min(k == 0 ? 0 : k - 1, xs.size() - 1);
                              };
                              auto from_first = [&](double s) {
                                  const std::size_t k = locate(s);
                                  return spec.cumulative_[k] + spec.interp_->integral(xs[k], s);
                              };
                              return from_first(t) - from_first(t0);
                          },
                      },
                      spec.kind_);
}

AsymptoticFit fit_alpha(const DampingSpec& spec, double t_lo, double t_hi, std::size_t n_samples) {
    if (t_lo < spec.t0() || t_hi > spec.t_max() || !(t_lo > 0.0)) {
        throw DomainError("fit_alpha: window outside the damping domain");
    }
    if (n_samples < 8) {
        throw FitDegenerateError("fit_alpha: need at least 8 samples");
    }
    if (!(t_hi >= 10.0 * t_lo)) {
        throw FitDegenerateError("fit_alpha: window must span at least one decade");
    }
    const auto ts = log_space(t_lo, t_hi, n_samples);
    std::vector<double> x(n_samples), y(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        x[i] = 2.0 * std::log(ts[i]);
        y[i] = eval_H(spec, ts[i]);
    }
    const LineFit line = fit_line(x, y);
    return AsymptoticFit{line.slope, line.intercept, line.residual_sup, t_lo, t_hi};
}

IntegralVerdict check_hw_condition(const DampingSpec& spec, double t_max) {
    if (!(t_max > spec.t0())) {
        throw DomainError("check_hw_condition: t_max must exceed t0");
    }
    if (t_max > spec.t_max()) {
        throw DomainError("check_hw_condition: t_max beyond the damping domain");
    }
    auto integrand = [&](double t) {
        const double h = eval_h(spec, t);
        return std::abs(2.0 * eval_dh(spec, t) + h * h);
    };

    IntegralVerdict out;
    const auto breaks = spec.derivative_breaks();
    if (breaks.empty()) {
        out.value = integrate(integrand, spec.t0(), t_max);
    } else {
        // Knots are only C1 breaks; integrate knot to knot.
        double a = spec.t0();
        for (double b : breaks) {
            if (b <= a) {
                continue;
            }
            const double hi = std::min(b, t_max);
            out.value += integrate(integrand, a, hi);
            a = hi;
            if (a >= t_max) {
                break;
            }
        }
    }

    const double tail_lo = std::max(spec.t0(), t_max / 10.0);
    const auto probes = log_space(tail_lo, t_max, 64);
    double scale = 0.0, tail_max = 0.0;
    for (double t : probes) {
        const double h = eval_h(spec, t);
        scale = std::max({scale, std::abs(2.0 * eval_dh(spec, t)), h * h});
        tail_max = std::max(tail_max, integrand(t));
    }
    if (tail_max <= 1e-12 * scale) {
        // Exact cancellation, as for h = 2/t.
        out.tail_exponent = std::numeric_limits<double>::infinity();
        out.converged = true;
        return out;
    }
    out.tail_exponent = tail_power_exponent(
        [&](double t) { return std::log(std::max(integrand(t), std::numeric_limits<double>::min())); },
        tail_lo, t_max);
    out.converged = out.tail_exponent > 1.0 + kTailMargin;
    return out;
}

std::vector<Knot> read_knots_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open knots file: " + path);
    }
    std::vector<Knot> knots;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        Knot k;
        if (!(fields >> k.t >> k.h)) {
            if (line_no == 1 && knots.empty()) {
                continue;  // header
            }
            throw ConfigError("malformed knots line " + std::to_string(line_no) + " in " + path);
        }
        knots.push_back(k);
    }
    return knots;
}

DampingSpec damping_from_config(const std::map<std::string, std::string>& kv, const std::string& base_dir) {
    const std::string kind = config_get(kv, "kind", std::string("powerlaw"));
    if (kind == "powerlaw") {
        return DampingSpec::power_law(config_get(kv, "lambda", 1.0), config_get(kv, "gamma", 1.0),
                                      config_get(kv, "t0", 1.0));
    }
    if (kind == "bessel") {
        return DampingSpec::bessel(config_get(kv, "mu", 1.0), config_get(kv, "nu", 0.0),
                                   config_get(kv, "t0", 1.0));
    }
    if (kind == "sampled") {
        auto it = kv.find("knots");
        if (it == kv.end()) {
            throw ConfigError("sampled damping requires knots=<csv path>");
        }
        std::filesystem::path p(it->second);
        if (p.is_relative() && !base_dir.empty()) {
            p = std::filesystem::path(base_dir) / p;
        }
        auto knots = read_knots_csv(p.string());
        if (kv.count("t0") != 0) {
            return DampingSpec::sampled(std::move(knots), config_get(kv, "t0", 0.0));
        }
        return DampingSpec::sampled(std::move(knots));
    }
    throw ConfigError("unknown damping kind '" + kind + "' (expected powerlaw|bessel|sampled)");
}

} // namespace spiraldim
