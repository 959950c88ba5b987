// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "../unit/oracles.hpp"
#include "modalres/asymptotics.hpp"
#include "modalres/modal_core.hpp"
#include "modalres/resolvent_scan.hpp"
#include "modalres/simulate.hpp"
#include "modalres/witness.hpp"

using namespace modalres;

namespace {

const SpectrumModel kSquares = SpectrumModel::power_law(1.0, 2.0);

struct Outcome {
    bool ok = true;
    std::string detail;
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

ResolventScan squares_scan(double theta, double lo, double hi, int points, bool peaks = false) {
    ScanConfig c;
    c.lambda_min = lo;
    c.lambda_max = hi;
    c.points = points;
    c.resolve_peaks = peaks;
    return scan(SystemParams::make(1.0, 2.0, 1.0, theta), kSquares, c);
}

// Simulations with gamma > 0 run by the suite; the dissipation check reuses them.
struct DampedRun {
    std::string name;
    SystemParams params;
    InitialData data;
    double t_max;
};
std::vector<DampedRun> g_damped_runs;

Outcome kernel_oracle() {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        double a = 0.5 + 3.5 * unif(rng), b = 0.5 + 3.5 * unif(rng);
        while (a == b) b = 0.5 + 3.5 * unif(rng);
        const auto p = SystemParams::make(a, b, 0.1 + 9.9 * unif(rng), -1.0 + 2.0 * unif(rng));
        const double omega = std::pow(10.0, 8.0 * unif(rng));
        const double lambda = std::pow(10.0, -1.0 + 5.0 * unif(rng));
        const Eigen::Matrix4cd shifted =
            Complex(0.0, lambda) * Eigen::Matrix4cd::Identity() - oracle::weighted_by_hand(p, omega);
        worst = std::max(worst, oracle::rel_diff(modal_resolvent_norm(p, omega, lambda),
                                                 oracle::power_inverse_norm(shifted)));
    }
    return {worst <= 1e-8, "max rel diff " + fmt("%.3e", worst)};
}

Outcome window_vs_exhaustive() {
    std::mt19937_64 rng(102);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    ScanConfig c;
    c.window_factor = 10.0;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto p = SystemParams::make(0.5 + 3.5 * unif(rng), 0.5 + 3.5 * unif(rng), 0.1 + 9.9 * unif(rng),
                                          -1.0 + 2.0 * unif(rng));
        // Keeps the K = 10 window inside the first 500 modes.
        const double lambda = std::pow(10.0, -1.0 + 3.0 * unif(rng));
        worst = std::max(worst, oracle::rel_diff(global_resolvent_norm(p, kSquares, lambda, c).norm,
                                                 oracle::exhaustive_norm(p, kSquares, lambda, 500)));
    }
    return {worst <= 1e-12, "max rel diff " + fmt("%.3e", worst)};
}

Outcome witness_unit_norm() {
    double norm_err = 0.0, res_err = 0.0;
    int checked = 0;
    for (double theta : {-1.0, -0.5, 0.25, 0.4, 0.6, 0.75, 1.0}) {
        const auto p = SystemParams::make(1.0, 2.0, 1.0, theta);
        for (double omega : {1e2, 1e4, 1e6, 1e8}) {
            for (const Witness& w : {witness_nonanalytic(p, omega), witness_polyopt(p, omega)}) {
                if (w.outside_theorem_range) continue;
                norm_err = std::max(norm_err, w.hnorm_error(p));
                res_err = std::max(res_err, oracle::rel_diff(w.residual, w.residual_direct));
                ++checked;
            }
        }
    }
    return {checked == 28 && norm_err <= 1e-10 && res_err <= 1e-9,
            std::to_string(checked) + " witnesses, norm err " + fmt("%.2e", norm_err) + ", residual rel diff " +
                fmt("%.2e", res_err)};
}

Outcome non_analyticity() {
    const auto p = SystemParams::make(1.0, 2.0, 1.0, 0.8);
    double first = 0.0, last = 0.0;
    bool dominated = true;
    for (int n = 1; n <= 100; ++n) {
        const double omega = 100.0 * n * n;
        const Witness w = witness_nonanalytic(p, omega);
        const double q = std::sqrt(w.lambda) / w.residual;
        if (n == 1) first = q;
        last = q;
        if (!(modal_resolvent_norm(p, omega, w.lambda) >= 1.0 / w.residual)) dominated = false;
    }
    const double factor = last / first;
    return {factor >= 1.5 && dominated,
            "growth factor " + fmt("%.4f", factor) + (dominated ? ", modal norm dominates every rung" : ", modal norm below bound")};
}

Outcome differentiability_constant() {
    const ResolventScan base = squares_scan(0.75, 1e2, 1e6, 200);
    const ResolventScan ext = squares_scan(0.75, 1e2, 1e7, 250);
    const auto d0 = estimate_K0(base, 1e3, {2.0});
    const auto d1 = estimate_K0(ext, 1e3, {2.0});
    const double r1 = d1.K0_estimate / d0.K0_estimate;
    const double r2 = d1.log_power_checks[0].sup / d0.log_power_checks[0].sup;
    return {r1 <= 1.05 && r2 <= 1.05,
            "K0 " + fmt("%.5g", d0.K0_estimate) + ", log ratio " + fmt("%.4f", r1) + ", log^2 ratio " + fmt("%.4f", r2)};
}

Outcome gevrey_exponent() {
    const ResolventScan base = squares_scan(0.2, 1e3, 1e5, 81);
    const ResolventScan ext = squares_scan(0.2, 1e3, 1e6, 121);
    const double slope = fit_exponent_between(base, 1e3, 1e5).slope;
    const double stable = bound_growth_ratio(base, ext, 0.4);
    const double growing = bound_growth_ratio(base, ext, 0.55);
    return {std::abs(slope + 0.4) <= 0.05 && stable <= kStableRatio && growing >= kGrowingRatio,
            "slope " + fmt("%.4f", slope) + ", ratio at 0.4 " + fmt("%.4f", stable) + ", ratio at 0.55 " +
                fmt("%.4f", growing)};
}

Outcome intermediate_regime() {
    const ResolventScan s = squares_scan(0.4, 1e3, 1e5, 81);
    const double slope = fit_exponent_between(s, 1e3, 1e5).slope;
    return {slope >= -0.80 && slope <= -0.6467, "slope " + fmt("%.4f", slope)};
}

Outcome exponential_regime() {
    const ResolventScan s = squares_scan(0.0, 1.0, 1e5, 101);
    double sup = 0.0;
    for (const auto& x : s.samples) sup = std::max(sup, x.norm);
    const double slope = fit_exponent(s).slope;
    const double full_slope = fit_exponent_between(s, 1.0, 1e5).slope;
    const auto p = SystemParams::make(1.0, 2.0, 1.0, 0.0);
    const double a500 = spectral_abscissa(p, kSquares, 500).value;
    const double a1000 = spectral_abscissa(p, kSquares, 1000).value;
    const double change = std::abs(a1000 - a500) / std::abs(a500);
    return {std::isfinite(sup) && std::abs(slope) <= 0.05 && a500 < 0.0 && change <= 0.10,
            "sup R " + fmt("%.5g", sup) + ", trailing slope " + fmt("%.4f", slope) +
                " (whole range " + fmt("%.4f", full_slope) + "), abscissa " + fmt("%.5g", a500) +
                ", doubling change " + fmt("%.4f", change)};
}

Outcome polynomial_regime() {
    const ResolventScan s = squares_scan(-0.5, 10.0, 1e4, 121, true);
    const double slope = fit_exponent_between(s, 10.0, 1e4).slope;
    const auto p = SystemParams::make(1.0, 2.0, 1.0, -0.5);
    std::vector<double> below, above, literal;
    for (double omega = 1e2; omega <= 1e8; omega *= 100.0) {
        const Witness w = witness_polyopt(p, omega);
        below.push_back(std::pow(w.lambda, 0.9) * w.residual);
        above.push_back(std::pow(w.lambda, 1.1) * w.residual);
        literal.push_back(std::pow(w.lambda, -0.9) * w.residual);
    }
    bool bracket = true;
    for (std::size_t i = 1; i < below.size(); ++i) {
        bracket = bracket && below[i] < below[i - 1] && above[i] > above[i - 1];
    }
    return {std::abs(slope - 1.0) <= 0.05 && bracket,
            "slope " + fmt("%.4f", slope) + ", lambda^0.9 res ratio " + fmt("%.4f", below.back() / below.front()) +
                ", lambda^1.1 res ratio " + fmt("%.4f", above.back() / above.front()) +
                ", lambda^-0.9 res ratio " + fmt("%.4g", literal.back() / literal.front())};
}

Outcome conservation_and_sync() {
    std::vector<double> times(201);
    for (std::size_t j = 0; j < times.size(); ++j) times[j] = 0.5 * static_cast<double>(j);
    const Trace cons = evolve(SystemParams::undamped(1.0, 2.0), smooth_profile(kSquares, 16), times);
    double drift = 0.0;
    for (double v : cons.total_norm) drift = std::max(drift, oracle::rel_diff(v, cons.total_norm[0]));

    const auto p = SystemParams::make(1.0, 1.0, 1.0, 0.5);
    InitialData d;
    for (Index n = 1; n <= 4; ++n) {
        const double om = kSquares.mode_at(n);
        d.terms.push_back({n, ModalState{om, 1.0 / om, 0.0, -0.5 / om, 0.0}});
    }
    std::vector<double> sync_times(301);
    for (std::size_t j = 0; j < sync_times.size(); ++j) sync_times[j] = 0.1 * static_cast<double>(j);
    const Trace tr = sync_check(p, d, sync_times);
    g_damped_runs.push_back({"sync", p, d, sync_times.back()});
    const double q0 = tr.q_norm->front();
    double q_drift = 0.0;
    for (double q : *tr.q_norm) q_drift = std::max(q_drift, std::abs(q - q0) / q0);
    bool monotone = true;
    for (std::size_t j = 1; j < tr.p_norm->size(); ++j) monotone = monotone && (*tr.p_norm)[j] <= (*tr.p_norm)[j - 1];
    const double p_drop = tr.p_norm->back() / tr.p_norm->front();
    return {drift <= 1e-9 && q_drift <= 1e-9 && monotone && p_drop < 1.0,
            "undamped drift " + fmt("%.2e", drift) + ", q drift " + fmt("%.2e", q_drift) + ", p decay " +
                fmt("%.3e", p_drop) + (monotone ? " monotone" : " not monotone")};
}

Outcome dissipation_identity() {
    for (double theta : {-0.5, 0.0, 0.75}) {
        g_damped_runs.push_back({"smooth theta=" + fmt("%g", theta), SystemParams::make(1.0, 2.0, 1.0, theta),
                                 smooth_profile(kSquares, 16), 5.0});
    }
    double worst = 0.0;
    int samples = 0;
    for (const DampedRun& run : g_damped_runs) {
        const double h = 1e-3;
        const auto energy = [&](double t) {
            const double e = state_at(run.params, run.data, t).hnorm(run.params);
            return e * e;
        };
        // A double-precision difference quotient resolves d/dt |Z|^2 only down
        // to about eps |Z|^2 / h, so the samples cover the part of the run where
        // the energy still moves: |2 Re<AZ,Z>| >= 1e-4 |Z|^2.
        double active = 0.0;
        for (int k = 1; k <= 400; ++k) {
            const double t = run.t_max * k / 400.0;
            const InitialData z = state_at(run.params, run.data, t);
            const double e = z.hnorm(run.params);
            if (std::abs(2.0 * dissipation(run.params, z)) >= 1e-4 * e * e) active = t;
        }
        if (active == 0.0) return {false, run.name + ": no resolvable dissipation"};
        for (int k = 1; k <= 20; ++k) {
            const double t = active * k / 20.0;
            const double fd = (-energy(t + 2 * h) + 8 * energy(t + h) - 8 * energy(t - h) + energy(t - 2 * h)) / (12 * h);
            const double form = 2.0 * dissipation(run.params, state_at(run.params, run.data, t));
            worst = std::max(worst, std::abs(fd - form) / std::abs(form));
            ++samples;
        }
    }
    return {worst <= 1e-6, std::to_string(g_damped_runs.size()) + " runs, " + std::to_string(samples) +
                               " times, max rel diff " + fmt("%.3e", worst)};
}

struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "kernel oracle equivalence", 5, kernel_oracle},
        {2, "window vs exhaustive", 30, window_vs_exhaustive},
        {3, "witness unit norm", 5, witness_unit_norm},
        {4, "non-analyticity ladder", 10, non_analyticity},
        {5, "differentiability constant", 60, differentiability_constant},
        {6, "Gevrey exponent theta=0.2", 60, gevrey_exponent},
        {7, "intermediate regime theta=0.4", 60, intermediate_regime},
        {8, "exponential regime theta=0", 60, exponential_regime},
        {9, "polynomial regime theta=-0.5", 30, polynomial_regime},
        {10, "conservation and synchronization", 10, conservation_and_sync},
        {11, "dissipation identity", 10, dissipation_identity},
    };
    int failed = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs < c.budget_s;
        const bool pass = o.ok && in_time;
        if (!pass) ++failed;
        std::printf("criterion %2d: %s  %s: %s (%.2f s of %.0f s)\n", c.id, pass ? "PASS" : "FAIL", c.name,
                    o.detail.c_str(), secs, c.budget_s);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
