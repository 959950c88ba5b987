#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "modalres/asymptotics.hpp"
#include "modalres/errors.hpp"

using namespace modalres;

namespace {

ResolventScan synthetic(const std::function<double(double)>& r, double lo, double hi, int points) {
    ResolventScan s;
    for (double l : log_grid(lo, hi, points)) s.samples.push_back({l, r(l), 1, 1.0, 1});
    return s;
}

ResolventScan squares_scan(double theta, double lo, double hi, int points) {
    ScanConfig c;
    c.lambda_min = lo;
    c.lambda_max = hi;
    c.points = points;
    return scan(SystemParams::make(1.0, 2.0, 1.0, theta), SpectrumModel::power_law(1.0, 2.0), c);
}

}  // namespace

TEST(Classify, GevreySmallTheta) {
    const RegularityClass rc = classify(0.2);
    ASSERT_TRUE(rc.gevrey_s);
    EXPECT_DOUBLE_EQ(*rc.gevrey_s, 0.4);
    EXPECT_DOUBLE_EQ(*rc.gevrey_delta_threshold, 2.5);
    EXPECT_EQ(rc.differentiable, Assertion::Yes);
    EXPECT_EQ(rc.stability, Stability::Exponential);
    EXPECT_DOUBLE_EQ(*rc.optimal_lower_exponent, 0.4);
    EXPECT_FALSE(rc.poly_rate);
}

TEST(Classify, NonAnalyticRange) {
    const RegularityClass rc = classify(0.75);
    EXPECT_EQ(rc.analytic, Assertion::No);
    EXPECT_DOUBLE_EQ(*rc.nonanalytic_threshold, 0.5);
    EXPECT_EQ(rc.differentiable, Assertion::Yes);
    EXPECT_EQ(rc.stability, Stability::Exponential);
    EXPECT_FALSE(rc.gevrey_s);
}

TEST(Classify, PolynomialRange) {
    const RegularityClass rc = classify(-0.5);
    EXPECT_EQ(rc.stability, Stability::Polynomial);
    EXPECT_DOUBLE_EQ(*rc.poly_rate, 1.0);
    EXPECT_DOUBLE_EQ(*rc.optimal_lower_exponent, 1.0);
    EXPECT_EQ(rc.differentiable, Assertion::NotAsserted);
    EXPECT_DOUBLE_EQ(*classify(-1.0).poly_rate, 0.5);
}

TEST(Classify, IntermediateGevrey) {
    const RegularityClass rc = classify(0.3);
    EXPECT_DOUBLE_EQ(*rc.gevrey_s, 0.9 / 1.6);
    EXPECT_DOUBLE_EQ(*rc.optimal_lower_exponent, 0.6);
}

TEST(Classify, Endpoints) {
    const RegularityClass zero = classify(0.0);
    EXPECT_EQ(zero.stability, Stability::Exponential);
    EXPECT_EQ(zero.differentiable, Assertion::NotAsserted);
    EXPECT_FALSE(zero.gevrey_s);
    EXPECT_FALSE(zero.optimal_lower_exponent);

    const RegularityClass quarter = classify(0.25);
    EXPECT_DOUBLE_EQ(*quarter.gevrey_s, 0.5);

    const RegularityClass half = classify(0.5);
    EXPECT_EQ(half.analytic, Assertion::NotAsserted);
    EXPECT_DOUBLE_EQ(*half.gevrey_s, 1.5 / 2.0);
    EXPECT_FALSE(half.optimal_lower_exponent);
    EXPECT_FALSE(half.nonanalytic_threshold);

    const RegularityClass one = classify(1.0);
    EXPECT_EQ(one.analytic, Assertion::No);
    EXPECT_DOUBLE_EQ(*one.nonanalytic_threshold, 0.0);
    EXPECT_EQ(one.differentiable, Assertion::NotAsserted);

    EXPECT_THROW(classify(1.0001), InvalidArgument);
    EXPECT_THROW(classify(-1.0001), InvalidArgument);
    EXPECT_THROW(classify(std::nan("")), InvalidArgument);
}

TEST(Classify, PiecewiseConstantOnIntervals) {
    for (double t = -0.99; t < 1.0; t += 0.01) {
        const RegularityClass rc = classify(t);
        EXPECT_EQ(rc.stability == Stability::Polynomial, t < 0.0);
        EXPECT_EQ(rc.analytic == Assertion::No, t > 0.5);
        EXPECT_EQ(rc.differentiable == Assertion::Yes, t > 0.0);
        EXPECT_EQ(rc.gevrey_s.has_value(), t > 0.0 && t <= 0.5);
    }
}

TEST(FitExponent, PlantedPowerLaw) {
    const auto s = synthetic([](double l) { return std::pow(l, -0.5); }, 1.0, 1e4, 41);
    const ExponentFit f = fit_exponent(s, 2.0);
    EXPECT_NEAR(f.slope, -0.5, 1e-12);
    EXPECT_LT(f.residual, 1e-12);
    EXPECT_NEAR(f.lambda_lo, 100.0, 1e-9);
    EXPECT_EQ(f.lambda_hi, 1e4);
    EXPECT_EQ(f.points, 21);
}

TEST(FitExponent, Constant) {
    const auto s = synthetic([](double) { return 3.0; }, 1.0, 1e3, 30);
    EXPECT_NEAR(fit_exponent(s, 2.0).slope, 0.0, 1e-13);
}

TEST(FitExponent, Errors) {
    const auto s = synthetic([](double l) { return 1.0 / l; }, 1.0, 10.0, 30);
    EXPECT_THROW(fit_exponent(s, 2.0), InvalidArgument);
    const auto sparse = synthetic([](double l) { return 1.0 / l; }, 1.0, 1e3, 6);
    EXPECT_THROW(fit_exponent(sparse, 2.0), InvalidArgument);
    EXPECT_THROW(fit_exponent(ResolventScan{}, 2.0), InvalidArgument);
}

TEST(FitExponent, PolynomialRegimeSlopeIsOne) {
    ScanConfig c;
    c.lambda_min = 10.0;
    c.lambda_max = 1e4;
    c.points = 61;
    c.resolve_peaks = true;
    const ResolventScan s =
        scan(SystemParams::make(1.0, 2.0, 1.0, -0.5), SpectrumModel::power_law(1.0, 2.0), c);
    EXPECT_NEAR(fit_exponent_between(s, 10.0, 1e4).slope, 1.0, 0.05);
    // The full requested span is available even though the samples moved.
    const ExponentFit full = fit_exponent(s, 3.0);
    EXPECT_EQ(full.points, 61);
    EXPECT_NEAR(full.slope, 1.0, 0.05);
}

TEST(CheckBound, ZeroExponentIsMax) {
    const auto s = synthetic([](double l) { return std::sin(l) + 2.0; }, 1.0, 100.0, 50);
    double best = 0.0, arg = 0.0;
    for (const auto& x : s.samples) {
        if (x.norm > best) {
            best = x.norm;
            arg = x.lambda;
        }
    }
    const BoundCheck b = check_bound(s, 0.0);
    EXPECT_EQ(b.sup, best);
    EXPECT_EQ(b.arg_lambda, arg);
}

TEST(CheckBound, ArgmaxInvariantUnderRescaling) {
    const auto f = [](double l) { return std::pow(l, -0.3) * (1.5 + std::cos(std::log(l))); };
    const auto s = synthetic(f, 1.0, 1e4, 80);
    const auto t = synthetic([&](double l) { return 17.0 * f(l); }, 1.0, 1e4, 80);
    for (double e : {0.0, 0.2, 0.5}) EXPECT_EQ(check_bound(s, e).arg_lambda, check_bound(t, e).arg_lambda);
}

TEST(CheckBound, GevreyBoundProbes) {
    // Stable at the proved exponent, growing above the optimal one.
    const ResolventScan base = squares_scan(0.2, 1e2, 1e4, 161);
    const ResolventScan ext = squares_scan(0.2, 1e2, 1e5, 201);
    EXPECT_LE(bound_growth_ratio(base, ext, *classify(0.2).gevrey_s), kStableRatio);
    EXPECT_GT(bound_growth_ratio(base, ext, 0.4 + 0.15), 1.2);
}

TEST(CheckBound, OptimalityDirectionAcrossTheta) {
    for (double theta : {0.1, 0.2, 0.3, 0.4}) {
        const ResolventScan base = squares_scan(theta, 1e2, 1e4, 121);
        const ResolventScan ext = squares_scan(theta, 1e2, 1e5, 151);
        const double s = *classify(theta).gevrey_s;
        EXPECT_LE(bound_growth_ratio(base, ext, s), kStableRatio) << theta;
        EXPECT_GT(bound_growth_ratio(base, ext, 2 * theta + 0.3), bound_growth_ratio(base, ext, s)) << theta;
        EXPECT_GT(bound_growth_ratio(base, ext, 2 * theta + 0.3), 1.5) << theta;
    }
}

TEST(EstimateK0, SyntheticDecay) {
    const auto s = synthetic([](double l) { return std::pow(l, -0.5); }, 1.0, 1e6, 121);
    const DifferentiabilityEstimate d = estimate_K0(s, 99.0, {2.0});
    // log(l)/sqrt(l) decreases for l > e^2, so the max sits at the first point past lambda0.
    EXPECT_NEAR(d.arg_lambda, 100.0, 1e-9);
    ASSERT_EQ(d.lambda0, 99.0);
    EXPECT_NEAR(d.K0_estimate, std::log(100.0) / 10.0, 1e-12);
    ASSERT_EQ(d.log_power_checks.size(), 1u);
    EXPECT_NEAR(d.log_power_checks[0].sup, std::pow(std::log(100.0), 2) / 10.0, 1e-12);
    EXPECT_THROW(estimate_K0(s, 1.0), InvalidArgument);
    EXPECT_THROW(estimate_K0(s, 1e7), InvalidArgument);
}

TEST(EstimateK0, NonAnalyticRegimeIsNonIncreasing) {
    const ResolventScan base = squares_scan(0.75, 1e2, 1e5, 121);
    const ResolventScan ext = squares_scan(0.75, 1e2, 1e6, 145);
    const auto d0 = estimate_K0(base, 1e3, {2.0});
    const auto d1 = estimate_K0(ext, 1e3, {2.0});
    EXPECT_TRUE(std::isfinite(d0.K0_estimate));
    EXPECT_LE(d1.K0_estimate, d0.K0_estimate * 1.05);
    EXPECT_LE(d1.log_power_checks[0].sup, d0.log_power_checks[0].sup * 1.05);
}

TEST(LeastSquares, Errors) {
    EXPECT_THROW(least_squares_line({1.0}, {1.0}), InvalidArgument);
    EXPECT_THROW(least_squares_line({1.0, 1.0}, {1.0, 2.0}), InvalidArgument);
    const LineFit f = least_squares_line({0, 1, 2}, {1, 3, 5});
    EXPECT_NEAR(f.slope, 2.0, 1e-15);
    EXPECT_NEAR(f.intercept, 1.0, 1e-15);
}
