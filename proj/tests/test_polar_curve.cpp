#include "spiraldim/errors.hpp"
#include "spiraldim/numerics.hpp"
#include "spiraldim/polar_curve.hpp"
#include "spiraldim/spiral_gen.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

using namespace spiraldim;

namespace {

// Trajectory with theta(t) = -t and radius r(t), sampled every dt.
Trajectory synthetic(double t0, double t1, double dt, double (*r)(double)) {
    Trajectory traj;
    for (double t = t0; t <= t1 + 1e-12; t += dt) {
        traj.samples.push_back({t, r(t) * std::cos(-t), r(t) * std::sin(-t)});
    }
    traj.t_start = t0;
    traj.t_end = traj.samples.back().t;
    traj.max_angle_step = dt;
    traj.source = "synthetic";
    return traj;
}

double unit(double) { return 1.0; }
double inverse_sqrt(double t) { return 1.0 / std::sqrt(t); }

PolarCurve circle(double step) {
    std::vector<double> phi, f;
    for (int k = 0; k * step <= kTwoPi + 1e-12; ++k) {
        phi.push_back(k * step);
        f.push_back(1.0);
    }
    return PolarCurve(phi, f, "circle");
}

}  // namespace

TEST(ToPolar, UnitCircleTrajectory) {
    const auto curve = to_polar(synthetic(0.0, 40.0, 0.01, unit));
    for (double v : curve.f()) {
        EXPECT_NEAR(v, 1.0, 1e-12);
    }
    EXPECT_NEAR(curve.phi_end() - curve.phi_begin(), 40.0, kDefaultPolarStep);
}

TEST(ToPolarProperty, RecoversAnalyticAmplitude) {
    const auto curve = to_polar(synthetic(2.0, 200.0, 0.002, inverse_sqrt));
    for (std::size_t k = 0; k < curve.size(); ++k) {
        EXPECT_NEAR(curve.f()[k], inverse_sqrt(curve.phi()[k]), 1e-8);
    }
}

TEST(ToPolar, ShortRotationIsNotASpiral) {
    EXPECT_THROW(to_polar(synthetic(0.0, 10.0, 0.01, unit)), NotSpiralError);
}

TEST(ToPolar, DropsEarlyOverdampedSegment) {
    const auto damping = DampingSpec::power_law(3.0, 0.75);
    // Starting at theta = -pi/4 the strong early damping turns the point
    // counterclockwise first.
    const auto traj = integrate(SystemSpec::damped(damping), {1.0, 1.0, -1.0}, 2e3);
    const auto curve = to_polar(traj);
    EXPECT_GT(curve.onset_time(), 1.0);
    EXPECT_TRUE(curve.monotone_certified());
    // Oracle: the polar angular rate -1 - (h/2) sin 2 theta is negative wherever h < 2.
    EXPECT_LE(curve.onset_time(), std::pow(1.5, 4.0 / 3.0) + 1.0);
    const auto too_short = integrate(SystemSpec::damped(damping), {1.0, 1.0, 0.0}, 10.0);
    EXPECT_THROW(to_polar(too_short), NotSpiralError);
}

TEST(ToPolarProperty, MirroringKeepsAmplitudes) {
    const auto traj = integrate(SystemSpec::damped(DampingSpec::power_law(1.0, 1.0)), {1.0, 1.0, 0.0}, 300.0);
    const auto a = to_polar(traj, true);
    const auto b = to_polar(traj, false);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        EXPECT_EQ(a.f()[k], b.f()[k]);
    }
    // Unmirrored points reproduce the trajectory orientation.
    const auto pb = b.points();
    const auto pa = a.points();
    EXPECT_NEAR(pb[5].x, pa[5].x, 1e-15);
    EXPECT_NEAR(pb[5].y, -pa[5].y, 1e-15);
}

TEST(ToPolarProperty, DampedCurveFollowsFittedPowerLaw) {
    const auto damping = DampingSpec::power_law(1.0, 1.0);
    const auto traj = integrate(SystemSpec::damped(damping), {1.0, 1.0, 0.0}, 1e4);
    const auto curve = to_polar(traj);
    const double alpha = fit_alpha(damping, 10.0, 1e4).alpha;
    const double offset = curve.phi_begin() < 1.0 ? kTwoPi - curve.phi_begin() : 0.0;
    double lo = INFINITY, hi = 0.0;
    for (std::size_t k = 0; k < curve.size(); ++k) {
        const double v = std::pow(curve.phi()[k] + offset, alpha) * curve.f()[k];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    EXPECT_GT(lo, 0.0);
    EXPECT_LT(hi / lo, 10.0);
}

TEST(ArcLength, CircleCircumference) {
    const auto c = circle(kPi / 256.0);
    EXPECT_NEAR(arc_length(c, 0.0, kTwoPi), kTwoPi, 1e-4);
    EXPECT_DOUBLE_EQ(arc_length(c, 1.0, 1.0), 0.0);
    EXPECT_THROW(arc_length(c, 2.0, 1.0), RangeError);
}

TEST(ArcLength, MatchesQuadratureOfPolarIntegrand) {
    const auto curve = generate(SpiralSpec(PowerSpiral{0.5}, 4 * kPi, 16 * kPi), 1e-3);
    const double oracle = integrate(
        [](double p) {
            const double f = std::pow(p, -0.5), fp = -0.5 * std::pow(p, -1.5);
            return std::sqrt(f * f + fp * fp);
        },
        4 * kPi, curve.phi_end(), 1e-12);
    EXPECT_NEAR(arc_length(curve, 4 * kPi, curve.phi_end()), oracle, 1e-4);
}

TEST(ArcLengthProperty, ExactlyAdditive) {
    const auto curve = generate(SpiralSpec(PowerSpiral{0.3}, 1.0, 300.0), kPi / 32);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(1.0, curve.phi_end());
    for (int i = 0; i < 100; ++i) {
        double p[3] = {u(rng), u(rng), u(rng)};
        std::sort(p, p + 3);
        EXPECT_NEAR(arc_length(curve, p[0], p[2]), arc_length(curve, p[0], p[1]) + arc_length(curve, p[1], p[2]),
                    1e-12);
    }
}

TEST(TurnDecrement, ClosedFormAndCircle) {
    const auto curve = generate(SpiralSpec(PowerSpiral{1.0}, 2.0, 100.0), kPi / 64);
    for (double p : {2.0, 10.0, 50.0}) {
        EXPECT_NEAR(turn_decrement(curve, p), kTwoPi / (p * (p + kTwoPi)), 1e-7 * std::pow(p, -2.0));
    }
    EXPECT_DOUBLE_EQ(turn_decrement(circle(kPi / 32), 0.0), 0.0);
    EXPECT_THROW(turn_decrement(curve, 95.0), RangeError);
}

TEST(TurnDecrement, PositiveAlongDampedCurve) {
    const auto traj = integrate(SystemSpec::damped(DampingSpec::power_law(1.0, 1.0)), {1.0, 1.0, 0.0}, 2e3);
    const auto curve = to_polar(traj);
    const double span = curve.phi_end() - kTwoPi - curve.phi_begin();
    for (int i = 0; i < 50; ++i) {
        EXPECT_GT(turn_decrement(curve, curve.phi_begin() + span * i / 49.0), 0.0);
    }
}

TEST(Diameter, CircleSpiralAndPair) {
    EXPECT_NEAR(diameter(circle(kPi / 32)), 2.0, 1e-6);
    const auto s = generate(SpiralSpec(PowerSpiral{0.5}, 1.0, 60.0), kPi / 32);
    EXPECT_GE(diameter(s) + 1e-12, s.value_at(1.0) + s.value_at(1.0 + kPi));
    const std::vector<Point2> pair{{0, 0}, {3, 4}};
    EXPECT_DOUBLE_EQ(diameter(pair), 5.0);
}

TEST(DiameterProperty, HullAgreesWithBruteForce) {
    const auto s = generate(SpiralSpec(PowerSpiral{0.5}, 1.0, 1200.0), kPi / 32);
    const auto pts = s.points();
    ASSERT_GT(pts.size(), 10000u);
    double brute = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            brute = std::max(brute, distance(pts[i], pts[j]));
        }
    }
    EXPECT_DOUBLE_EQ(diameter(s), brute);
}

TEST(OdeDerivative, AgreesWithCentralDifferences) {
    const auto damping = DampingSpec::power_law(1.0, 1.0);
    const auto traj = integrate(SystemSpec::damped(damping), {1.0, 1.0, 0.0}, 500.0, {1e-11, 1e-14}, kPi / 64);
    const auto curve = to_polar(traj, true, kPi / 64);
    const auto fd = curve.derivative();
    const auto exact = ode_f_prime(traj, damping);
    std::size_t checked = 0;
    for (const auto& e : exact) {
        if (e.phi < curve.phi_begin() + 1.0 || e.phi > curve.phi_end() - kTwoPi) {
            continue;
        }
        const auto k = static_cast<std::size_t>(std::lround((e.phi - curve.phi_begin()) / (kPi / 64)));
        if (std::abs(curve.phi()[k] - e.phi) < 1e-3) {
            // Scale: the mean of |f'| over the following turn.
            const double scale = turn_decrement(curve, e.phi) / kTwoPi;
            EXPECT_NEAR(fd[k], e.f_prime, 0.05 * scale);
            ++checked;
        }
    }
    EXPECT_GT(checked, 10u);
}

TEST(PolarCurve, RejectsInvalidSamples) {
    EXPECT_THROW(PolarCurve({1.0}, {1.0}, "x"), SpecError);
    EXPECT_THROW(PolarCurve({1.0, 2.0}, {1.0, 0.0}, "x"), SpecError);
    EXPECT_THROW(PolarCurve({2.0, 1.0}, {1.0, 1.0}, "x"), SpecError);
}

TEST(PolarCurveCsv, RoundTripIsExact) {
    const auto s = generate(SpiralSpec(PowerSpiral{0.5}, 1.0, 30.0), kPi / 32);
    const auto path = (std::filesystem::temp_directory_path() / "spiraldim_polar_test.csv").string();
    write_polar_curve_csv(s, path);
    const auto back = read_polar_curve_csv(path);
    ASSERT_EQ(back.size(), s.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
        EXPECT_EQ(back.phi()[k], s.phi()[k]);
        EXPECT_EQ(back.f()[k], s.f()[k]);
    }
    std::filesystem::remove(path);
}
