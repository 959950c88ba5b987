#pragma once

#include <optional>
#include <string>
#include <vector>

#include "modalres/resolvent_scan.hpp"

namespace modalres {

enum class Assertion { Yes, No, NotAsserted };
enum class Stability { Exponential, Polynomial };

std::string to_string(Assertion a);
std::string to_string(Stability s);

/**
 * Regularity and stability regime as a function of theta.
 *
 *   theta in (1/2, 1] : not analytic; |lambda|^r R unbounded for r > 2(1 - theta)
 *   theta in (0, 1)   : differentiable (log(|lambda|) R bounded)
 *   theta in (0, 1/4] : Gevrey, s = 2 theta
 *   theta in (1/4,1/2]: Gevrey, s = 3 theta / (1 + 2 theta)
 *   theta in (0, 1/2) : |lambda|^r R unbounded for r > 2 theta
 *   theta in [0, 1]   : exponentially stable
 *   theta in [-1, 0)  : polynomially stable at rate -1/(2 theta), which is sharp
 */
struct RegularityClass {
    double theta = 0.0;
    Assertion analytic = Assertion::NotAsserted;
    Assertion differentiable = Assertion::NotAsserted;
    std::optional<double> gevrey_s;
    std::optional<double> gevrey_delta_threshold;
    Stability stability = Stability::Exponential;
    std::optional<double> poly_rate;
    std::optional<double> nonanalytic_threshold;
    std::optional<double> optimal_lower_exponent;
};

RegularityClass classify(double theta);

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double lambda_lo = 0.0;
    double lambda_hi = 0.0;
    double residual = 0.0;  ///< RMS of the log-log fit
    int points = 0;
};

/// Least squares of log R against log lambda over the trailing `decades`
/// decades of the scan. Needs >= 8 points there.
ExponentFit fit_exponent(const ResolventScan& scan, double decades = 2.0);
/// Same fit restricted to samples with lambda in [lo, hi].
ExponentFit fit_exponent_between(const ResolventScan& scan, double lo, double hi);

struct BoundCheck {
    double sup = 0.0;       ///< max over the grid of lambda^s R(lambda)
    double arg_lambda = 0.0;
};

BoundCheck check_bound(const ResolventScan& scan, double s);
/// check_bound restricted to lambda in [lo, hi].
BoundCheck check_bound_between(const ResolventScan& scan, double s, double lo, double hi);

/// Thresholds for the two-scan limsup probes.
inline constexpr double kStableRatio = 1.2;
inline constexpr double kGrowingRatio = 1.5;

/// sup(lambda^s R) over `extended` divided by the same sup over `base`.
/// `extended` is expected to cover `base` and reach one decade further.
double bound_growth_ratio(const ResolventScan& base, const ResolventScan& extended, double s);

struct DifferentiabilityEstimate {
    double K0_estimate = 0.0;  ///< max over lambda >= lambda0 of log(lambda) R(lambda)
    double lambda0 = 0.0;
    double arg_lambda = 0.0;
    struct LogPower {
        double r;
        double sup;
        double arg_lambda;
    };
    std::vector<LogPower> log_power_checks;  ///< (log lambda)^r R(lambda) maxima
};

DifferentiabilityEstimate estimate_K0(const ResolventScan& scan, double lambda0,
                                      const std::vector<double>& log_powers = {});

/// Least-squares line through (x, y); residual is the RMS of y - fit.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;
};
LineFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace modalres
