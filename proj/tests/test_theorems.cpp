#include "spiraldim/cli.hpp"
#include "spiraldim/errors.hpp"
#include "spiraldim/spiral_gen.hpp"
#include "spiraldim/theorems.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace spiraldim;

namespace {

double witness(const CriterionReport& r, const std::string& hyp, const std::string& key) {
    for (const auto& h : r.hypotheses) {
        if (h.name == hyp) {
            for (const auto& [k, v] : h.witness) {
                if (k == key) {
                    return v;
                }
            }
        }
    }
    ADD_FAILURE() << "missing witness " << hyp << '.' << key;
    return NAN;
}

Status status_of(const CriterionReport& r, const std::string& hyp) {
    for (const auto& h : r.hypotheses) {
        if (h.name == hyp) {
            return h.status;
        }
    }
    ADD_FAILURE() << "missing hypothesis " << hyp;
    return Status::Undetermined;
}

CriterionReport predict(double lambda, double gamma) {
    const auto spec = DampingSpec::power_law(lambda, gamma);
    const auto [lo, hi] = default_fit_window(spec, 1e5);
    return predict_dimension(spec, fit_alpha(spec, lo, hi));
}

PolarCurve damped_curve(double lambda, double t_end) {
    const auto traj = integrate(SystemSpec::damped(DampingSpec::power_law(lambda, 1.0)), {1.0, 1.0, 0.0}, t_end);
    return to_polar(traj);
}

}  // namespace

TEST(PredictDimension, PowerLawExamples) {
    const auto a = predict(4.0 / 3.0, 1.0);
    ASSERT_TRUE(a.dimension());
    EXPECT_NEAR(*a.dimension(), 6.0 / 5.0, 1e-9);
    EXPECT_EQ(a.criterion, Criterion::PowerLawDimension);

    const auto b = predict(2.0, 1.0);
    ASSERT_TRUE(b.dimension());
    EXPECT_DOUBLE_EQ(*b.dimension(), 1.0);
    EXPECT_EQ(b.criterion, Criterion::DimensionOne);

    const auto c = predict(3.0, 0.75);
    EXPECT_FALSE(c.dimension());
    EXPECT_EQ(status_of(c, "log_asymptotic_form"), Status::Undetermined);
}

TEST(PredictDimensionProperty, ConsistentWithClosedForm) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.05, 1.95);
    for (int i = 0; i < 25; ++i) {
        const double lambda = u(rng);
        const auto r = predict(lambda, 1.0);
        ASSERT_TRUE(r.dimension()) << lambda;
        EXPECT_NEAR(*r.dimension(), 4.0 / (2.0 + lambda), 1e-9) << lambda;
    }
}

TEST(PredictDimensionProperty, BesselDampingGivesFourOverFourMinusMu) {
    for (double mu : {0.25, 0.5, 1.0, 1.5}) {
        const auto spec = DampingSpec::bessel(mu, 0.0);
        const auto [lo, hi] = default_fit_window(spec, 1e5);
        const auto r = predict_dimension(spec, fit_alpha(spec, lo, hi));
        ASSERT_TRUE(r.dimension()) << mu;
        EXPECT_NEAR(*r.dimension(), 4.0 / (4.0 - mu), 1e-9);
    }
}

TEST(ClassifyRectifiability, Examples) {
    EXPECT_EQ(classify_rectifiability(DampingSpec::power_law(3.0, 1.0), 1e5).rectifiability(),
              Rectifiability::Rectifiable);
    EXPECT_EQ(classify_rectifiability(DampingSpec::power_law(3.0, 0.75), 1e5).rectifiability(),
              Rectifiability::Rectifiable);
    for (double lambda : {2.0, 5.0 / 3.0, 4.0 / 3.0, 1.0}) {
        EXPECT_EQ(classify_rectifiability(DampingSpec::power_law(lambda, 1.0), 1e5).rectifiability(),
                  Rectifiability::NonRectifiable)
            << lambda;
    }
}

TEST(TheoremsProperty, RectifiableNeverPairsWithFractalDimension) {
    const DampingSpec specs[] = {DampingSpec::power_law(3.0, 1.0), DampingSpec::power_law(3.0, 0.75),
                                 DampingSpec::power_law(2.0, 1.0), DampingSpec::power_law(1.0, 1.0),
                                 DampingSpec::power_law(0.5, 1.0), DampingSpec::power_law(1.0, 0.25),
                                 DampingSpec::bessel(1.0, 0.0)};
    for (const auto& s : specs) {
        const auto rect = classify_rectifiability(s, 1e5);
        const auto [lo, hi] = default_fit_window(s, 1e5);
        const auto dim = predict_dimension(s, fit_alpha(s, lo, hi));
        const bool both = rect.rectifiability() == Rectifiability::Rectifiable && dim.dimension() &&
                          *dim.dimension() > 1.0;
        EXPECT_FALSE(both) << s.describe();
    }
}

TEST(SpiralCriterion, PowerSpiralPasses) {
    const auto curve = generate(SpiralSpec(PowerSpiral{0.5}, kTwoPi, 400 * kPi), kPi / 32);
    const auto r = check_spiral_criterion(curve, 0.5);
    EXPECT_TRUE(r.all_pass());
    ASSERT_TRUE(r.dimension());
    EXPECT_NEAR(*r.dimension(), 4.0 / 3.0, 1e-15);
    EXPECT_NEAR(witness(r, "amplitude_lower_bound", "m_low"), 1.0, 1e-12);
    // phi^(3/2) (phi^-1/2 - (phi + 2 pi)^-1/2) increases towards pi.
    const double a_bar = witness(r, "decrement_bound", "a_bar");
    EXPECT_LT(a_bar, kPi);
    EXPECT_GT(a_bar, 0.95 * kPi);

    const auto bound = validate_lemma_f_bound(curve, 0.5, a_bar);
    EXPECT_TRUE(bound.holds);
}

TEST(SpiralCriterion, CircleFails) {
    std::vector<double> phi, f;
    for (int k = 0; k < 700; ++k) {
        phi.push_back(1.0 + k * kPi / 32);
        f.push_back(1.0);
    }
    const auto r = check_spiral_criterion(PolarCurve(phi, f, "circle"), 0.5);
    EXPECT_FALSE(r.all_pass());
    EXPECT_EQ(status_of(r, "decrement_bound"), Status::Fail);
    EXPECT_FALSE(r.dimension());
}

TEST(SpiralCriterion, ShortCurveThrows) {
    const auto curve = generate(SpiralSpec(PowerSpiral{0.5}, kTwoPi, 5 * kPi), kPi / 32);
    EXPECT_THROW(check_spiral_criterion(curve, 0.5), RangeError);
}

TEST(SpiralCriterion, DampedCurvePasses) {
    const auto curve = damped_curve(1.0, 1e4);
    const auto r = check_spiral_criterion(curve, 0.5);
    EXPECT_TRUE(r.all_pass());
    ASSERT_TRUE(r.dimension());
    EXPECT_NEAR(*r.dimension(), 4.0 / 3.0, 1e-15);
    EXPECT_TRUE(validate_lemma_f_bound(curve, 0.5, witness(r, "decrement_bound", "a_bar")).holds);
}

TEST(DerivativeCriterion, PowerSpirals) {
    const auto half = generate(SpiralSpec(PowerSpiral{0.5}, kTwoPi, 400 * kPi), kPi / 32);
    const auto r = check_derivative_criterion(half, 0.5);
    EXPECT_TRUE(r.all_pass());
    EXPECT_NEAR(witness(r, "derivative_lower_bound", "K"), 0.5, 1e-3);
    EXPECT_NEAR(*r.dimension(), 4.0 / 3.0, 1e-15);

    const auto one = generate(SpiralSpec(PowerSpiral{1.0}, kTwoPi, 400 * kPi), kPi / 32);
    const auto s = check_derivative_criterion(one, 1.0);
    EXPECT_TRUE(s.all_pass());
    EXPECT_EQ(s.criterion, Criterion::DimensionOneDerivative);
    // -phi f' = 1/phi peaks at the first angle, where f' is a one-sided difference.
    EXPECT_NEAR(witness(s, "derivative_lower_bound", "K"), 1.0 / kTwoPi, 2e-2 / kTwoPi);
    EXPECT_NEAR(witness(s, "amplitude_upper_bound", "m_bar"), 1.0, 1e-9);
    EXPECT_DOUBLE_EQ(*s.dimension(), 1.0);
}

TEST(DerivativeCriterion, StaircaseFailsNotIdenticallyZero) {
    std::vector<double> phi, f;
    for (int k = 0; k < 2000; ++k) {
        const double p = kTwoPi + k * kPi / 32;
        phi.push_back(p);
        // Constant over each block of three turns, then a drop.
        f.push_back(1.0 / (1.0 + std::floor(k / 192.0)));
    }
    const auto r = check_derivative_criterion(PolarCurve(phi, f, "staircase"), 0.5);
    EXPECT_EQ(status_of(r, "derivative_not_identically_zero"), Status::Fail);
    EXPECT_FALSE(r.dimension());
}

TEST(DerivativeCriterionProperty, ScaleInvariantStatuses) {
    for (double alpha : {0.25, 0.5, 0.75}) {
        const auto base = check_derivative_criterion(
            generate(SpiralSpec(PowerSpiral{alpha}, kTwoPi, 300 * kPi), kPi / 32), alpha);
        for (double scale : {1e-3, 0.5, 40.0}) {
            const auto scaled = check_derivative_criterion(
                generate(SpiralSpec(ScaledPowerSpiral{scale, alpha}, kTwoPi, 300 * kPi), kPi / 32), alpha);
            ASSERT_EQ(base.hypotheses.size(), scaled.hypotheses.size());
            for (std::size_t i = 0; i < base.hypotheses.size(); ++i) {
                EXPECT_EQ(base.hypotheses[i].status, scaled.hypotheses[i].status)
                    << base.hypotheses[i].name << " scale " << scale;
            }
        }
    }
}

TEST(TheoremsProperty, PassingCriterionAgreesWithEstimator) {
    const double alpha = 0.75;
    const auto curve = generate(SpiralSpec(PowerSpiral{alpha}, kTwoPi, 1200 * kPi), kPi / 32);
    const auto r = check_spiral_criterion(curve, alpha);
    ASSERT_TRUE(r.all_pass());
    const auto est = estimate_curve_dimension(curve, 0.1, 2e-4, Method::SausageGrid, WindowPolicy::AutoPlateau,
                                              FitModel::HeadCorrected);
    EXPECT_NEAR(est.dim_estimate, *r.dimension(), 0.05);
}

TEST(PolarOdes, IdentitiesHoldAlongTrajectories) {
    const auto d2 = DampingSpec::power_law(2.0, 1.0);
    const auto t2 = integrate(SystemSpec::damped(d2), {1.0, 1.0, 0.0}, 1e3);
    const auto e2 = validate_polar_odes(t2, d2, 1000);
    EXPECT_LT(e2.max_rel_err_r, 1e-5);
    EXPECT_LT(e2.max_rel_err_theta, 1e-5);

    const auto d0 = DampingSpec::power_law(1e-12, 1.0);
    const auto t0 = integrate(SystemSpec::damped(d0), {1.0, 1.0, 0.0}, 100.0);
    const auto e0 = validate_polar_odes(t0, d0, 200);
    EXPECT_LT(e0.max_rel_err_theta, 1e-8);

    const auto coarse = integrate(SystemSpec::damped(d2), {1.0, 1.0, 0.0}, 1e3, {1e-3, 1e-6});
    const auto ec = validate_polar_odes(coarse, d2, 1000);
    EXPECT_LT(ec.max_rel_err_r, 1e-2);
    EXPECT_LT(ec.max_rel_err_theta, 1e-2);
}

TEST(PolarOdes, DeterministicForSeed) {
    const auto d = DampingSpec::power_law(1.0, 1.0);
    const auto t = integrate(SystemSpec::damped(d), {1.0, 1.0, 0.0}, 500.0);
    const auto a = validate_polar_odes(t, d, 50, 7);
    const auto b = validate_polar_odes(t, d, 50, 7);
    EXPECT_EQ(a.max_rel_err_r, b.max_rel_err_r);
    EXPECT_EQ(a.max_rel_err_theta, b.max_rel_err_theta);
}
