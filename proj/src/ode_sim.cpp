#include "spiraldim/ode_sim.hpp"

#include "spiraldim/csv.hpp"
#include "spiraldim/errors.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

namespace spiraldim {

namespace {

using State = std::array<double, 2>;

double principal_angle_diff(double from, double to) {
    double d = to - from;
    while (d > kPi) {
        d -= kTwoPi;
    }
    while (d <= -kPi) {
        d += kTwoPi;
    }
    return d;
}

} // namespace

SystemSpec SystemSpec::damped(DampingSpec damping) {
    return SystemSpec(DampedOscillator{std::move(damping)});
}

SystemSpec SystemSpec::bessel(double mu, double nu, double t0) {
    if (!(t0 > 0.0)) {
        throw SpecError("Bessel system: t0 must be positive");
    }
    return SystemSpec(BesselSystem{mu, nu, t0});
}

double SystemSpec::domain_start() const {
    if (const auto* d = std::get_if<DampedOscillator>(&kind_)) {
        return d->damping.t0();
    }
    return std::get<BesselSystem>(kind_).t0;
}

DampingSpec SystemSpec::damping() const {
    if (const auto* d = std::get_if<DampedOscillator>(&kind_)) {
        return d->damping;
    }
    const auto& b = std::get<BesselSystem>(kind_);
    return DampingSpec::bessel(b.mu, b.nu, b.t0);
}

double SystemSpec::angular_speed_bound(double t) const {
    // theta' = (x y' - y x') / r^2 = -(k x^2 + y^2 + h x y) / r^2 with
    // restoring coefficient k, hence |theta'| <= max(|k|, 1) + |h| / 2.
    if (const auto* d = std::get_if<DampedOscillator>(&kind_)) {
        return 1.0 + 0.5 * std::abs(eval_h(d->damping, t));
    }
    const auto& b = std::get<BesselSystem>(kind_);
    const double k = 1.0 - b.nu * b.nu / (t * t);
    return std::max(std::abs(k), 1.0) + 0.5 * std::abs((2.0 - b.mu) / t);
}

double Trajectory::final_radius() const {
    const auto& s = samples.back();
    return std::hypot(s.x, s.y);
}

Trajectory integrate(const SystemSpec& sys, StateSample init, double t_end, Tolerances tol,
                     double max_angle_step) {
    namespace odeint = boost::numeric::odeint;

    if (init.x == 0.0 && init.y == 0.0) {
        throw OriginError("initial state is the origin; only nontrivial solutions are traced");
    }
    if (init.t < sys.domain_start()) {
        throw DomainError("initial time precedes the system's domain");
    }
    if (!(t_end > init.t)) {
        throw DomainError("t_end must exceed the initial time");
    }
    if (!(max_angle_step > 0.0 && max_angle_step < kPi / 2.0)) {
        throw DomainError("max_angle_step must lie in (0, pi/2)");
    }
    if (!(tol.rel > 0.0) || !(tol.abs > 0.0)) {
        throw DomainError("tolerances must be positive");
    }

    std::function<void(const State&, State&, double)> rhs;
    if (const auto* d = std::get_if<DampedOscillator>(&sys.kind())) {
        const DampingSpec& damping = d->damping;
        rhs = [&damping](const State& s, State& ds, double t) {
            ds[0] = s[1];
            ds[1] = -s[0] - eval_h(damping, t) * s[1];
        };
    } else {
        const auto b = std::get<BesselSystem>(sys.kind());
        rhs = [b](const State& s, State& ds, double t) {
            ds[0] = s[1];
            ds[1] = -(1.0 - b.nu * b.nu / (t * t)) * s[0] - (2.0 - b.mu) / t * s[1];
        };
    }

    Trajectory traj;
    traj.t_start = init.t;
    traj.t_end = t_end;
    traj.tolerances = tol;
    traj.max_angle_step = max_angle_step;
    traj.samples.push_back(init);

    // The system is linear, so the stepper works on the state divided by a
    // power of two that tracks the radius. The absolute tolerance then stays
    // meaningful after the solution has decayed by many orders of magnitude.
    auto stepper = odeint::make_dense_output(tol.abs, tol.rel, odeint::runge_kutta_dopri5<State>());
    double scale = std::exp2(std::round(std::log2(std::hypot(init.x, init.y))));
    State x0{init.x / scale, init.y / scale};
    stepper.initialize(x0, init.t, std::min(1e-3, 0.01 * (t_end - init.t)));
    auto renormalize = [&]() {
        const State& cur = stepper.current_state();
        const double r = std::hypot(cur[0], cur[1]);
        if (r > 1.0 / 16.0 && r < 16.0) {
            return;
        }
        const double f = std::exp2(std::round(std::log2(r)));
        scale *= f;
        const State next{cur[0] / f, cur[1] / f};
        stepper.initialize(next, stepper.current_time(), stepper.current_time_step());
    };

    double last_angle = std::atan2(init.y, init.x);
    const double target = 0.9 * max_angle_step;
    auto next_emit = [&](const StateSample& s) {
        return s.t + target / sys.angular_speed_bound(s.t);
    };
    double t_next = std::min(next_emit(init), t_end);

    auto emit_until = [&](double t_limit) {
        State st;
        while (t_next <= t_limit) {
            double t_try = t_next;
            const StateSample& prev = traj.samples.back();
            for (;;) {
                stepper.calc_state(t_try, st);
                const double ang = std::atan2(st[1], st[0]);
                if (std::abs(principal_angle_diff(last_angle, ang)) <= max_angle_step || t_try - prev.t < 1e-14 * t_try) {
                    last_angle = ang;
                    break;
                }
                t_try = prev.t + 0.5 * (t_try - prev.t);
            }
            if (st[0] == 0.0 && st[1] == 0.0) {
                throw OriginError("solution reached the origin numerically");
            }
            traj.samples.push_back({t_try, scale * st[0], scale * st[1]});
            if (t_try >= t_end) {
                return;
            }
            t_next = std::min(next_emit(traj.samples.back()), t_end);
        }
    };

    try {
        while (stepper.current_time() < t_end) {
            const auto [t_old, t_new] = stepper.do_step(rhs);
            if (t_new - t_old < 1e-13 * std::max(std::abs(t_new), 1.0)) {
                std::ostringstream os;
                os << "step size underflow at t = " << t_new;
                throw StiffnessError(os.str());
            }
            emit_until(std::min(t_new, t_end));
            if (traj.samples.back().t >= t_end) {
                break;
            }
            renormalize();
        }
    } catch (const odeint::step_adjustment_error& e) {
        throw StiffnessError(std::string("step adjustment failed: ") + e.what());
    }
    return traj;
}

std::vector<double> unwrapped_angle(const Trajectory& traj) {
    std::vector<double> theta(traj.samples.size());
    if (theta.empty()) {
        return theta;
    }
    double prev = std::atan2(traj.samples[0].y, traj.samples[0].x);
    theta[0] = prev;
    for (std::size_t i = 1; i < traj.samples.size(); ++i) {
        const double a = std::atan2(traj.samples[i].y, traj.samples[i].x);
        theta[i] = theta[i - 1] + principal_angle_diff(prev, a);
        prev = a;
    }
    return theta;
}

std::size_t rotation_onset(const Trajectory& traj) {
    const auto theta = unwrapped_angle(traj);
    std::size_t onset = 0;
    for (std::size_t i = 1; i < theta.size(); ++i) {
        if (!(theta[i] < theta[i - 1])) {
            onset = i;
        }
    }
    return onset;
}

double trajectory_length(const Trajectory& traj) {
    double len = 0.0;
    for (std::size_t i = 1; i < traj.samples.size(); ++i) {
        len += std::hypot(traj.samples[i].x - traj.samples[i - 1].x, traj.samples[i].y - traj.samples[i - 1].y);
    }
    return len;
}

EnergyEstimate energy_constant(const Trajectory& traj, const DampingSpec& damping) {
    if (traj.samples.size() < 4) {
        throw RangeError("energy_constant: trajectory too short");
    }
    std::vector<double> v(traj.samples.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& s = traj.samples[i];
        v[i] = std::exp(eval_H(damping, s.t)) * (s.x * s.x + s.y * s.y);
    }
    EnergyEstimate out;
    out.c_estimate = v.back();
    const std::size_t tail = v.size() - v.size() / 4;
    for (std::size_t i = tail; i < v.size(); ++i) {
        out.delta_sup_tail = std::max(out.delta_sup_tail, std::abs(v[i] - out.c_estimate));
    }
    return out;
}

std::string trajectory_csv(const Trajectory& traj) {
    std::ostringstream os;
    os << "t,x,y\n";
    for (const auto& s : traj.samples) {
        os << format_g17(s.t) << ',' << format_g17(s.x) << ',' << format_g17(s.y) << '\n';
    }
    return os.str();
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
    write_text_file(path, trajectory_csv(traj));
}

Trajectory read_trajectory_csv(const std::string& path) {
    const auto rows = read_numeric_csv(path, {"t", "x", "y"});
    Trajectory traj;
    traj.source = path;
    traj.samples.reserve(rows.size());
    for (const auto& r : rows) {
        traj.samples.push_back({r[0], r[1], r[2]});
    }
    if (traj.samples.size() < 2) {
        throw ConfigError("trajectory CSV needs at least two samples: " + path);
    }
    for (std::size_t i = 1; i < traj.samples.size(); ++i) {
        if (!(traj.samples[i].t > traj.samples[i - 1].t)) {
            throw ConfigError("trajectory CSV times must be strictly increasing: " + path);
        }
    }
    const auto theta = unwrapped_angle(traj);
    double max_step = 0.0;
    for (std::size_t i = 1; i < theta.size(); ++i) {
        max_step = std::max(max_step, std::abs(theta[i] - theta[i - 1]));
    }
    traj.max_angle_step = max_step;
    traj.t_start = traj.samples.front().t;
    traj.t_end = traj.samples.back().t;
    return traj;
}

} // namespace spiraldim
