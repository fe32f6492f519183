#include "spiraldim/boxdim.hpp"

#include "spiraldim/csv.hpp"
#include "spiraldim/errors.hpp"
#include "spiraldim/geometry.hpp"
#include "spiraldim/numerics.hpp"
#include "spiraldim/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace spiraldim {

namespace {

std::optional<double> sausage_disk(std::optional<double> nucleus, double eps) {
    if (!nucleus) {
        return std::nullopt;
    }
    return std::max(*nucleus, eps) + eps;
}

std::optional<double> box_disk(std::optional<double> nucleus, double eps) {
    if (!nucleus) {
        return std::nullopt;
    }
    return std::max(*nucleus, eps);
}

void require_below_diameter(double eps, double diam) {
    if (!(eps < diam)) {
        std::ostringstream os;
        os << "epsilon " << eps << " is not below the curve diameter " << diam;
        throw RangeError(os.str());
    }
}

} // namespace

double sausage_area(const PolarCurve& curve, double eps, double grid_factor, std::optional<double> nucleus_radius) {
    const auto pts = curve.points();
    require_below_diameter(eps, diameter(pts));
    return sausage_area_polyline(pts, eps, grid_factor, sausage_disk(nucleus_radius, eps));
}

std::uint64_t box_count(const PolarCurve& curve, double eps, std::optional<double> nucleus_radius) {
    const auto pts = curve.points();
    require_below_diameter(eps, diameter(pts));
    return box_count_polyline(pts, eps, box_disk(nucleus_radius, eps));
}

std::vector<double> epsilon_ladder(double eps_max, double eps_min) {
    if (!(eps_min > 0.0) || !(eps_max > eps_min)) {
        throw DomainError("epsilon ladder needs 0 < eps_min < eps_max");
    }
    std::vector<double> ladder;
    for (double e = eps_max; e >= eps_min * (1.0 - 1e-12); e *= 0.5) {
        ladder.push_back(e);
    }
    const double ratio = eps_min / ladder.back();
    if (ratio < 1.0 - 1e-12 && ratio >= 0.4 && ratio <= 0.6) {
        ladder.push_back(eps_min);
    }
    return ladder;
}

SausageProfile build_profile(const PolarCurve& curve, double eps_max, double eps_min, Method method,
                             double grid_factor) {
    const auto ladder = epsilon_ladder(eps_max, eps_min);
    const auto pts = curve.points();
    require_below_diameter(eps_max, diameter(pts));

    if (curve.phi_end() - curve.phi_begin() < kTwoPi) {
        throw TruncationError("curve spans less than one turn; the tail cannot be closed off");
    }
    const double last_turn = turn_decrement(curve, curve.phi_end() - kTwoPi);
    const double smallest = ladder.back();
    if (!(last_turn <= 0.5 * smallest)) {
        std::ostringstream os;
        os << "curve too short for eps = " << smallest << ": its last turn still shrinks by " << last_turn
           << " (> eps/2); extend the curve or raise eps_min";
        throw TruncationError(os.str());
    }

    SausageProfile profile;
    profile.curve_ref = curve.source();
    profile.nucleus_radius = curve.f().back();
    profile.entries.resize(ladder.size());
    parallel_for(ladder.size(), [&](std::size_t k) {
        const double eps = ladder[k];
        double value = 0.0;
        if (method == Method::SausageGrid) {
            value = sausage_area_polyline(pts, eps, grid_factor, sausage_disk(profile.nucleus_radius, eps));
        } else {
            value = static_cast<double>(box_count_polyline(pts, eps, box_disk(profile.nucleus_radius, eps)));
        }
        profile.entries[k] = {eps, value, method};
    });
    return profile;
}

namespace {

/// Relative-residual least squares for A and B at fixed s.
struct LinearPart {
    double a = 0.0;
    double b = 0.0;
    double rss = 0.0;
};

LinearPart solve_linear_part(std::span<const double> eps, std::span<const double> area, double s) {
    const std::size_t n = eps.size();
    std::vector<double> c1(n), c2(n);
    for (std::size_t i = 0; i < n; ++i) {
        c1[i] = std::pow(eps[i], s) / area[i];
        c2[i] = eps[i] / area[i];
    }
    auto dot = [n](const std::vector<double>& u, const std::vector<double>& v) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += u[i] * v[i];
        }
        return acc;
    };
    auto rss_of = [&](double a, double b) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = a * c1[i] + b * c2[i] - 1.0;
            acc += r * r;
        }
        return acc;
    };
    // Gram-Schmidt on the two columns, twice for stability.
    const double n1 = std::sqrt(dot(c1, c1));
    std::vector<double> q1(n), q2 = c2;
    for (std::size_t i = 0; i < n; ++i) {
        q1[i] = c1[i] / n1;
    }
    double r12 = 0.0;
    for (int pass = 0; pass < 2; ++pass) {
        const double proj = dot(q1, q2);
        r12 += proj;
        for (std::size_t i = 0; i < n; ++i) {
            q2[i] -= proj * q1[i];
        }
    }
    const double r22 = std::sqrt(dot(q2, q2));
    std::vector<double> ones(n, 1.0);
    LinearPart out;
    if (!(r22 > 1e-10 * std::sqrt(dot(c2, c2)))) {
        // Columns coincide (s = 1): a single term suffices.
        out.a = dot(q1, ones) / n1;
        out.b = 0.0;
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            q2[i] /= r22;
        }
        const double y1 = dot(q1, ones);
        const double y2 = dot(q2, ones);
        out.b = y2 / r22;
        out.a = (y1 - r12 * out.b) / n1;
    }
    out.rss = rss_of(out.a, out.b);
    return out;
}

} // namespace

PowerLinearFit fit_power_plus_linear(std::span<const double> eps, std::span<const double> area) {
    const std::size_t n = eps.size();
    if (n < 4 || area.size() != n) {
        throw FitDegenerateError("fit_power_plus_linear: need at least four points");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(eps[i] > 0.0) || !(area[i] > 0.0)) {
            throw FitDegenerateError("fit_power_plus_linear: epsilon and area must be positive");
        }
    }
    auto rss = [&](double s) { return solve_linear_part(eps, area, s).rss; };

    constexpr int kScan = 200;
    int best_k = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= kScan; ++k) {
        const double v = rss(static_cast<double>(k) / kScan);
        if (v < best) {
            best = v;
            best_k = k;
        }
    }
    // A profile that a single linear term already explains (a rectifiable
    // curve) leaves s unidentified, since A = 0 fits at every s. Report s = 1.
    const bool linear_only = rss(1.0) <= best * (1.0 + 1e-9) + 1e-28;
    double lo = std::max(0, best_k - 1) / static_cast<double>(kScan);
    double hi = std::min(kScan, best_k + 1) / static_cast<double>(kScan);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = rss(x1), f2 = rss(x2);
    while (!linear_only && hi - lo > 1e-13) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = rss(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = rss(x2);
        }
    }
    double s = f1 <= f2 ? x1 : x2;
    if (linear_only) {
        s = 1.0;
    } else if (const double s_scan = best_k / static_cast<double>(kScan); rss(s_scan) < rss(s)) {
        s = s_scan;
    }

    // Gauss-Newton polish on (A, B, s); only improving steps are kept.
    LinearPart lp = solve_linear_part(eps, area, s);
    double a = lp.a, b = lp.b, cur = lp.rss;
    for (int iter = 0; iter < 30 && !linear_only && cur > 0.0; ++iter) {
        double jtj[3][3] = {}, jtr[3] = {};
        for (std::size_t i = 0; i < n; ++i) {
            const double es = std::pow(eps[i], s);
            const double r = (a * es + b * eps[i]) / area[i] - 1.0;
            const double j[3] = {es / area[i], eps[i] / area[i], a * es * std::log(eps[i]) / area[i]};
            for (int p = 0; p < 3; ++p) {
                jtr[p] += j[p] * r;
                for (int q = 0; q < 3; ++q) {
                    jtj[p][q] += j[p] * j[q];
                }
            }
        }
        // Solve jtj * d = -jtr by Cramer's rule; give up when singular.
        auto det3 = [](const double m[3][3]) {
            return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                   m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                   m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        };
        const double det = det3(jtj);
        if (!(std::abs(det) > 0.0) || !std::isfinite(det)) {
            break;
        }
        double d[3];
        for (int c = 0; c < 3; ++c) {
            double m[3][3];
            for (int p = 0; p < 3; ++p) {
                for (int q = 0; q < 3; ++q) {
                    m[p][q] = q == c ? -jtr[p] : jtj[p][q];
                }
            }
            d[c] = det3(m) / det;
        }
        const double s_new = s + d[2];
        if (!(s_new >= 0.0 && s_new <= 1.0)) {
            break;
        }
        const double a_new = a + d[0], b_new = b + d[1];
        double trial = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = (a_new * std::pow(eps[i], s_new) + b_new * eps[i]) / area[i] - 1.0;
            trial += r * r;
        }
        if (!(trial < cur)) {
            break;
        }
        a = a_new;
        b = b_new;
        s = s_new;
        cur = trial;
    }

    PowerLinearFit out;
    out.exponent = s;
    out.coef_power = a;
    out.coef_linear = b;

    // Standard error from the curvature of the profiled residual sum.
    const double sigma2 = n > 3 ? cur / static_cast<double>(n - 3) : std::numeric_limits<double>::infinity();
    const double h = 1e-3;
    const double sa = std::clamp(s - h, 0.0, 1.0 - 2 * h);
    const double curvature = (rss(sa + 2 * h) - 2.0 * rss(sa + h) + rss(sa)) / (h * h);
    if (cur == 0.0) {
        out.exponent_stderr = 0.0;
    } else if (curvature > 0.0) {
        out.exponent_stderr = std::sqrt(2.0 * sigma2 / curvature);
    } else {
        out.exponent_stderr = std::numeric_limits<double>::infinity();
    }

    double mean = 0.0;
    for (double v : area) {
        mean += std::log(v);
    }
    mean /= static_cast<double>(n);
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double model = a * std::pow(eps[i], s) + b * eps[i];
        const double r = model > 0.0 ? std::log(model) - std::log(area[i]) : std::numeric_limits<double>::infinity();
        ss_res += r * r;
        ss_tot += (std::log(area[i]) - mean) * (std::log(area[i]) - mean);
    }
    out.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return out;
}

DimensionReport fit_dimension(const SausageProfile& profile, WindowPolicy policy, FitModel model) {
    const auto& e = profile.entries;
    if (e.size() < kMinFitPoints) {
        throw FitDegenerateError("fit_dimension: profile needs at least 5 entries");
    }
    const Method method = e.front().method;
    std::vector<double> eps(e.size()), area(e.size()), x(e.size()), y(e.size());
    for (std::size_t k = 0; k < e.size(); ++k) {
        if (e[k].method != method) {
            throw FitDegenerateError("fit_dimension: profile mixes methods");
        }
        if (!(e[k].epsilon > 0.0) || !(e[k].area > 0.0)) {
            throw FitDegenerateError("fit_dimension: epsilon and area must be positive");
        }
        eps[k] = e[k].epsilon;
        area[k] = method == Method::SausageGrid ? e[k].area : e[k].area * eps[k] * eps[k];
        x[k] = std::log(eps[k]);
        y[k] = std::log(e[k].area);
    }

    struct WindowFit {
        double dimension = 0.0;
        double std_error = 0.0;
        double r_squared = 0.0;
    };
    // Box counts: dim = slope of log N against log(1/eps).
    auto log_linear = [&](std::size_t lo, std::size_t len) {
        const LineFit f = fit_line(std::span(x).subspan(lo, len), std::span(y).subspan(lo, len));
        const double dim = method == Method::SausageGrid ? 2.0 - f.slope : -f.slope;
        return WindowFit{dim, f.slope_stderr, f.r_squared};
    };
    auto fit_window = [&](std::size_t lo, std::size_t len) {
        if (model == FitModel::LogLinear) {
            return log_linear(lo, len);
        }
        const PowerLinearFit f = fit_power_plus_linear(std::span(eps).subspan(lo, len), std::span(area).subspan(lo, len));
        return WindowFit{2.0 - f.exponent, f.exponent_stderr, f.r_squared};
    };

    std::size_t best_lo = 0;
    std::size_t best_len = e.size();
    WindowFit best = fit_window(0, e.size());
    if (policy == WindowPolicy::AutoPlateau) {
        // Entries run from large to small epsilon, so later windows win ties.
        auto key = [](double v) { return std::isnan(v) ? std::numeric_limits<double>::infinity() : v; };
        for (std::size_t len = kMinFitPoints; len <= e.size(); ++len) {
            for (std::size_t lo = 0; lo + len <= e.size(); ++lo) {
                const WindowFit f = fit_window(lo, len);
                const double cur = key(f.std_error), ref = key(best.std_error);
                const double tie = 1e-12 * std::max(std::abs(ref), 1e-300);
                const bool better = cur < ref - tie;
                const bool tied_smaller = std::abs(cur - ref) <= tie && lo + len > best_lo + best_len;
                if (better || tied_smaller) {
                    best = f;
                    best_lo = lo;
                    best_len = len;
                }
            }
        }
    }

    DimensionReport r;
    r.method = method;
    r.model = model;
    r.raw_dimension = best.dimension;
    r.dim_estimate = std::clamp(best.dimension, 1.0, 2.0);
    r.std_error = best.std_error;
    r.r_squared = best.r_squared;
    r.n_points = best_len;
    r.eps_max = e[best_lo].epsilon;
    r.eps_min = e[best_lo + best_len - 1].epsilon;
    r.log_linear_dimension = log_linear(best_lo, best_len).dimension;
    return r;
}

DimensionReport with_prediction(DimensionReport report, std::optional<double> predicted, double tolerance) {
    report.predicted = predicted;
    if (!predicted) {
        report.verdict = Verdict::NoPrediction;
    } else {
        report.verdict = std::abs(report.dim_estimate - *predicted) <= tolerance ? Verdict::Match : Verdict::Mismatch;
    }
    return report;
}

std::string method_name(Method m) { return m == Method::SausageGrid ? "SausageGrid" : "BoxCount"; }

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Match: return "MATCH";
        case Verdict::Mismatch: return "MISMATCH";
        case Verdict::NoPrediction: return "NO_PREDICTION";
    }
    return "NO_PREDICTION";
}

std::string policy_name(WindowPolicy p) { return p == WindowPolicy::FullRange ? "FullRange" : "AutoPlateau"; }

std::string model_name(FitModel m) { return m == FitModel::LogLinear ? "LogLinear" : "HeadCorrected"; }

std::string profile_csv(const SausageProfile& profile) {
    std::ostringstream os;
    os << "epsilon,area,method\n";
    for (const auto& e : profile.entries) {
        os << format_g17(e.epsilon) << ',' << format_g17(e.area) << ',' << method_name(e.method) << '\n';
    }
    return os.str();
}

} // namespace spiraldim
