#include "modalres/asymptotics.hpp"

#include <cmath>

#include "modalres/errors.hpp"

namespace modalres {

std::string to_string(Assertion a) {
    switch (a) {
        case Assertion::Yes: return "yes";
        case Assertion::No: return "no";
        case Assertion::NotAsserted: return "not-asserted";
    }
    return "not-asserted";
}

std::string to_string(Stability s) {
    return s == Stability::Exponential ? "exponential" : "polynomial";
}

RegularityClass classify(double theta) {
    if (!(theta >= -1.0 && theta <= 1.0)) throw InvalidArgument("classify", "theta must lie in [-1, 1]");
    RegularityClass rc;
    rc.theta = theta;
    if (theta > 0.5) {
        rc.analytic = Assertion::No;
        rc.nonanalytic_threshold = 2.0 * (1.0 - theta);
    }
    if (theta > 0.0 && theta < 1.0) rc.differentiable = Assertion::Yes;
    if (theta > 0.0 && theta <= 0.25) {
        rc.gevrey_s = 2.0 * theta;
    } else if (theta > 0.25 && theta <= 0.5) {
        rc.gevrey_s = 3.0 * theta / (1.0 + 2.0 * theta);
    }
    if (rc.gevrey_s) rc.gevrey_delta_threshold = 1.0 / *rc.gevrey_s;
    if (theta > 0.0 && theta < 0.5) rc.optimal_lower_exponent = 2.0 * theta;
    if (theta >= 0.0) {
        rc.stability = Stability::Exponential;
    } else {
        rc.stability = Stability::Polynomial;
        rc.poly_rate = -1.0 / (2.0 * theta);
        rc.optimal_lower_exponent = -2.0 * theta;
    }
    return rc;
}

LineFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw InvalidArgument("least_squares_line", "need at least two paired points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw InvalidArgument("least_squares_line", "abscissae are all equal");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ss += r * r;
    }
    f.residual = std::sqrt(ss / static_cast<double>(n));
    return f;
}

ExponentFit fit_exponent_between(const ResolventScan& scan, double lo, double hi) {
    std::vector<double> x, y;
    double seen_lo = HUGE_VAL, seen_hi = 0.0;
    for (const auto& s : scan.samples) {
        if (s.lambda < lo || s.lambda > hi) continue;
        if (!(s.norm > 0.0) || !std::isfinite(s.norm)) {
            throw InvalidArgument("fit_exponent", "resolvent norms must be positive and finite");
        }
        x.push_back(std::log(s.lambda));
        y.push_back(std::log(s.norm));
        seen_lo = std::min(seen_lo, s.lambda);
        seen_hi = std::max(seen_hi, s.lambda);
    }
    if (x.size() < 8) throw InvalidArgument("fit_exponent", "fewer than 8 scan points in the fit window");
    const LineFit line = least_squares_line(x, y);
    return {line.slope, line.intercept, seen_lo, seen_hi, line.residual, static_cast<int>(x.size())};
}

ExponentFit fit_exponent(const ResolventScan& scan, double decades) {
    if (scan.samples.empty()) throw InvalidArgument("fit_exponent", "empty scan");
    if (!(decades > 0.0)) throw InvalidArgument("fit_exponent", "decades must be positive");
    double lmin = HUGE_VAL, lmax = 0.0;
    for (const auto& s : scan.samples) {
        lmin = std::min(lmin, s.lambda);
        lmax = std::max(lmax, s.lambda);
    }
    // Resolved peaks sit inside their grid cells; span is judged by the grid.
    if (scan.grid_hi > 0.0) {
        lmin = std::min(lmin, scan.grid_lo);
        lmax = std::max(lmax, scan.grid_hi);
    }
    const double lo = lmax / std::pow(10.0, decades);
    // Allow a relative slack of 1e-9 so that a scan of exactly `decades` decades qualifies.
    if (lo < lmin * (1.0 - 1e-9)) {
        throw InvalidArgument("fit_exponent", "scan spans fewer decades than requested");
    }
    return fit_exponent_between(scan, lo * (1.0 - 1e-12), lmax);
}

BoundCheck check_bound_between(const ResolventScan& scan, double s, double lo, double hi) {
    BoundCheck best;
    bool any = false;
    for (const auto& p : scan.samples) {
        if (p.lambda < lo || p.lambda > hi) continue;
        const double v = std::pow(p.lambda, s) * p.norm;
        if (!any || v > best.sup) {
            best = {v, p.lambda};
            any = true;
        }
    }
    if (!any) throw InvalidArgument("check_bound", "no scan points in range");
    return best;
}

BoundCheck check_bound(const ResolventScan& scan, double s) {
    return check_bound_between(scan, s, 0.0, HUGE_VAL);
}

double bound_growth_ratio(const ResolventScan& base, const ResolventScan& extended, double s) {
    return check_bound(extended, s).sup / check_bound(base, s).sup;
}

DifferentiabilityEstimate estimate_K0(const ResolventScan& scan, double lambda0, const std::vector<double>& log_powers) {
    if (!(lambda0 > 1.0)) throw InvalidArgument("estimate_K0", "lambda0 must exceed 1");
    DifferentiabilityEstimate est;
    est.lambda0 = lambda0;
    bool any = false;
    for (const auto& p : scan.samples) {
        if (p.lambda < lambda0) continue;
        const double v = std::log(p.lambda) * p.norm;
        if (!any || v > est.K0_estimate) {
            est.K0_estimate = v;
            est.arg_lambda = p.lambda;
        }
        any = true;
    }
    if (!any) throw InvalidArgument("estimate_K0", "lambda0 lies beyond the scanned range");
    for (const double r : log_powers) {
        DifferentiabilityEstimate::LogPower lp{r, 0.0, 0.0};
        for (const auto& p : scan.samples) {
            if (p.lambda < lambda0) continue;
            const double v = std::pow(std::log(p.lambda), r) * p.norm;
            if (v > lp.sup) {
                lp.sup = v;
                lp.arg_lambda = p.lambda;
            }
        }
        est.log_power_checks.push_back(lp);
    }
    return est;
}

}  // namespace modalres
