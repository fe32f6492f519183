#include "spiraldim/boxdim.hpp"
#include "spiraldim/cli.hpp"
#include "spiraldim/errors.hpp"
#include "spiraldim/spiral_gen.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace spiraldim;

namespace {

SausageProfile synthetic_profile(double d, double b, Method method = Method::SausageGrid) {
    SausageProfile p;
    for (double e : epsilon_ladder(0.1, 1e-4)) {
        double v = std::pow(e, 2.0 - d) + b * e;
        if (method == Method::BoxCount) {
            v /= e * e;
        }
        p.entries.push_back({e, v, method});
    }
    return p;
}

PolarCurve half_spiral() { return generate(SpiralSpec(PowerSpiral{0.5}, kTwoPi, 400 * kPi), kPi / 32); }

}  // namespace

TEST(EpsilonLadder, HalvingWithOptionalEndpoint) {
    const auto l = epsilon_ladder(0.1, 1e-3);
    ASSERT_EQ(l.size(), 7u);
    EXPECT_DOUBLE_EQ(l.back(), 0.1 / 64);
    const auto m = epsilon_ladder(0.1, 0.1 / 64 * 0.5 * 1.1);
    EXPECT_EQ(m.size(), 8u);
    EXPECT_DOUBLE_EQ(m.back(), 0.1 / 64 * 0.5 * 1.1);
    for (std::size_t k = 1; k < m.size(); ++k) {
        const double ratio = m[k] / m[k - 1];
        EXPECT_GE(ratio, 0.4);
        EXPECT_LE(ratio, 0.6);
    }
    EXPECT_THROW(epsilon_ladder(0.1, 0.2), DomainError);
}

TEST(BuildProfile, SevenDecreasingEntries) {
    const auto p = build_profile(half_spiral(), 0.1, 1e-3, Method::SausageGrid);
    ASSERT_EQ(p.entries.size(), 7u);
    for (std::size_t k = 1; k < p.entries.size(); ++k) {
        EXPECT_LT(p.entries[k].epsilon, p.entries[k - 1].epsilon);
        EXPECT_LT(p.entries[k].area, p.entries[k - 1].area);
    }
    EXPECT_NEAR(p.nucleus_radius, std::pow(400 * kPi, -0.5), 1e-3);
}

TEST(BuildProfile, TruncatedCurveIsRejected) {
    EXPECT_THROW(build_profile(half_spiral(), 0.1, 1e-6, Method::SausageGrid), TruncationError);
    EXPECT_THROW(build_profile(half_spiral(), 5.0, 1e-3, Method::SausageGrid), RangeError);
}

TEST(FitDimension, ExactPowerLawBothModels) {
    for (double d : {1.0, 4.0 / 3.0, 1.6, 2.0}) {
        const auto p = synthetic_profile(d, 0.0);
        for (auto model : {FitModel::LogLinear, FitModel::HeadCorrected}) {
            for (auto policy : {WindowPolicy::FullRange, WindowPolicy::AutoPlateau}) {
                const auto r = fit_dimension(p, policy, model);
                EXPECT_NEAR(r.raw_dimension, d, 1e-12) << model_name(model) << ' ' << policy_name(policy);
            }
        }
    }
}

TEST(FitDimension, BoxCountsUseTheSameScale) {
    const auto r = fit_dimension(synthetic_profile(4.0 / 3.0, 0.0, Method::BoxCount), WindowPolicy::FullRange,
                                 FitModel::LogLinear);
    EXPECT_NEAR(r.dim_estimate, 4.0 / 3.0, 1e-12);
}

TEST(FitDimension, HeadCorrectionRemovesLinearBias) {
    // A rectifiable head of length 5 contributes 2 * 5 * eps.
    const auto p = synthetic_profile(1.5, 10.0);
    const auto head = fit_dimension(p, WindowPolicy::FullRange, FitModel::HeadCorrected);
    const auto plain = fit_dimension(p, WindowPolicy::FullRange, FitModel::LogLinear);
    EXPECT_NEAR(head.raw_dimension, 1.5, 1e-9);
    EXPECT_GT(std::abs(plain.raw_dimension - 1.5), 0.05);
}

TEST(FitDimension, RejectsDegenerateProfiles) {
    SausageProfile p = synthetic_profile(1.5, 0.0);
    p.entries.resize(4);
    EXPECT_THROW(fit_dimension(p, WindowPolicy::FullRange), FitDegenerateError);
    p = synthetic_profile(1.5, 0.0);
    p.entries[2].method = Method::BoxCount;
    EXPECT_THROW(fit_dimension(p, WindowPolicy::FullRange), FitDegenerateError);
}

TEST(WithPrediction, Verdicts) {
    DimensionReport r;
    r.dim_estimate = 1.3;
    EXPECT_EQ(*with_prediction(r, 4.0 / 3.0).verdict, Verdict::Match);
    EXPECT_EQ(*with_prediction(r, 1.2).verdict, Verdict::Mismatch);
    EXPECT_EQ(*with_prediction(r, std::nullopt).verdict, Verdict::NoPrediction);
}

TEST(BoxdimProperty, AreaIncreasesWithEpsilon) {
    const auto curve = half_spiral();
    const auto p = build_profile(curve, 0.2, 1e-3, Method::SausageGrid);
    for (std::size_t k = 1; k < p.entries.size(); ++k) {
        EXPECT_GT(p.entries[k - 1].area, p.entries[k].area);
    }
    const auto b = build_profile(curve, 0.2, 1e-3, Method::BoxCount);
    for (std::size_t k = 1; k < b.entries.size(); ++k) {
        EXPECT_LT(b.entries[k - 1].area, b.entries[k].area);
    }
}

TEST(BoxdimProperty, TwoSidedSausageBounds) {
    const auto curve = half_spiral();
    const double length = arc_length(curve, curve.phi_begin(), curve.phi_end());
    const double diam = diameter(curve);
    const auto p = build_profile(curve, 0.1, 5e-4, Method::SausageGrid);
    for (const auto& e : p.entries) {
        const double eps = e.epsilon;
        const double disk = std::max(p.nucleus_radius, eps) + eps;
        const double upper = 4 * kPi * eps * length + 4 * kPi * eps * eps + kPi * disk * disk;
        const double lower = 2 * eps * diam + kPi * eps * eps;
        EXPECT_LE(e.area, 1.02 * upper) << "eps " << eps;
        EXPECT_GE(e.area, 0.98 * lower) << "eps " << eps;
    }
}

TEST(BoxdimProperty, FiniteLengthSausageLimit) {
    const double rate = 0.1;
    const auto curve = generate(SpiralSpec(ExpSpiral{rate}, 1.0, 140.0), kPi / 32);
    const double length = std::sqrt(1.0 + rate * rate) / rate * std::exp(-rate);
    const double eps = 5e-4;
    const double area = sausage_area(curve, eps, kDefaultGridFactor, curve.f().back());
    EXPECT_NEAR(area / (2 * eps), length, 0.03 * length);
}

TEST(BoxdimProperty, GeneratorEstimateMatchesAndMethodsAgree) {
    const auto curve = generate(SpiralSpec(PowerSpiral{0.5}, kTwoPi, 2400 * kPi), kPi / 32);
    const auto s = estimate_curve_dimension(curve, 0.1, 2e-4, Method::SausageGrid, WindowPolicy::AutoPlateau,
                                            FitModel::HeadCorrected);
    const auto b = estimate_curve_dimension(curve, 0.1, 2e-4, Method::BoxCount, WindowPolicy::AutoPlateau,
                                            FitModel::HeadCorrected);
    EXPECT_NEAR(s.dim_estimate, 4.0 / 3.0, 0.05);
    EXPECT_NEAR(b.dim_estimate, 4.0 / 3.0, 0.05);
    EXPECT_NEAR(s.dim_estimate, b.dim_estimate, 0.06);
}

TEST(BoxdimProperty, LongerSpanIsStable) {
    const auto shorter = generate(SpiralSpec(PowerSpiral{0.5}, kTwoPi, 1200 * kPi), kPi / 32);
    const auto longer = generate(SpiralSpec(PowerSpiral{0.5}, kTwoPi, 2400 * kPi), kPi / 32);
    const auto a = estimate_curve_dimension(shorter, 0.1, 5e-4, Method::SausageGrid, WindowPolicy::FullRange,
                                            FitModel::HeadCorrected);
    const auto b = estimate_curve_dimension(longer, 0.1, 5e-4, Method::SausageGrid, WindowPolicy::FullRange,
                                            FitModel::HeadCorrected);
    EXPECT_LE(std::abs(a.dim_estimate - b.dim_estimate), std::max(a.std_error, b.std_error));
}

TEST(BoxdimProperty, DimensionOneSpiralStaysNearOne) {
    const auto curve = generate(SpiralSpec(PowerSpiral{1.0}, kTwoPi, 400 * kPi), kPi / 32);
    const auto r = estimate_curve_dimension(curve, 0.1, 1e-3, Method::SausageGrid, WindowPolicy::AutoPlateau,
                                            FitModel::HeadCorrected);
    EXPECT_LE(r.dim_estimate, 1.08);
}

TEST(ProfileCsv, Format) {
    SausageProfile p;
    p.entries = {{0.5, 0.25, Method::SausageGrid}};
    EXPECT_EQ(profile_csv(p), "epsilon,area,method\n0.5,0.25,SausageGrid\n");
}
