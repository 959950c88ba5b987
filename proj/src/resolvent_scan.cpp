#include "modalres/resolvent_scan.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "modalres/errors.hpp"
#include "modalres/modal_core.hpp"
#include "modalres/parallel.hpp"

namespace modalres {

void ScanConfig::validate() const {
    if (!(lambda_min > 0.0) || !std::isfinite(lambda_max) || !(lambda_min < lambda_max)) {
        throw InvalidArgument("ScanConfig", "need 0 < lambda_min < lambda_max");
    }
    if (points < 2) throw InvalidArgument("ScanConfig", "points must be at least 2");
    if (!(window_factor >= 1.0)) throw InvalidArgument("ScanConfig", "window_factor must be >= 1");
    if (baseline_modes < 1) throw InvalidArgument("ScanConfig", "baseline_modes must be >= 1");
    if (exhaustive_limit < 1 || guided_samples < 2 || resonance_halo < 0) {
        throw InvalidArgument("ScanConfig", "window search settings must be positive");
    }
}

std::vector<double> ResolventScan::lambdas() const {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(s.lambda);
    return out;
}

std::vector<double> ResolventScan::norms() const {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(s.norm);
    return out;
}

namespace {

// Memoized modal norms for one lambda, with the running argmax.
class ModeMaximizer {
public:
    ModeMaximizer(const SystemParams& params, const SpectrumModel& spectrum, double lambda)
        : params_(params), spectrum_(spectrum), lambda_(lambda) {}

    double eval(Index n) {
        auto [it, inserted] = values_.try_emplace(n, 0.0);
        if (inserted) {
            const double omega = spectrum_.mode_at(n);
            it->second = modal_resolvent_norm(params_, omega, lambda_);
            if (it->second > best_.norm || best_.mode_index == 0) {
                best_.norm = it->second;
                best_.mode_index = n;
                best_.omega = omega;
            }
        }
        return it->second;
    }

    void eval_range(Index lo, Index hi) {
        for (Index n = lo; n <= hi; ++n) eval(n);
    }

    // Integer ternary search for a local max strictly inside (lo, hi).
    void refine(Index lo, Index hi) {
        while (hi - lo > 3) {
            const Index m1 = lo + (hi - lo) / 3;
            const Index m2 = hi - (hi - lo) / 3;
            if (eval(m1) < eval(m2)) {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        eval_range(lo, hi);
    }

    const std::map<Index, double>& values() const { return values_; }

    GlobalNorm result() const {
        GlobalNorm out = best_;
        out.modes_examined = static_cast<Index>(values_.size());
        return out;
    }

private:
    const SystemParams& params_;
    const SpectrumModel& spectrum_;
    double lambda_;
    std::map<Index, double> values_;
    GlobalNorm best_;
};

struct Window {
    Index lo = 1;
    Index hi = 0;
    bool empty() const { return hi < lo; }
    Index count() const { return empty() ? 0 : hi - lo + 1; }
};

Window resonance_window(const SystemParams& params, const SpectrumModel& spectrum, double lambda, double k) {
    const double l2 = lambda * lambda;
    const double omega_lo = l2 / (k * std::max(params.a(), params.b()));
    const double omega_hi = k * l2 / std::min(params.a(), params.b());
    Window w{spectrum.first_at_or_above(omega_lo), spectrum.last_at_or_below(omega_hi)};
    if (const auto size = spectrum.size()) w.hi = std::min(w.hi, *size);
    return w;
}

void guided_search(ModeMaximizer& mm, const SystemParams& params, const SpectrumModel& spectrum, double lambda,
                   const Window& w, const ScanConfig& cfg) {
    const double l2 = lambda * lambda;
    for (const double c : {params.a(), params.b(), params.alpha_avg()}) {
        const Index center = std::clamp(spectrum.first_at_or_above(l2 / c), w.lo, w.hi);
        mm.eval_range(std::max(w.lo, center - cfg.resonance_halo - 1),
                      std::min(w.hi, center + cfg.resonance_halo));
    }
    const double ratio = static_cast<double>(w.hi) / static_cast<double>(w.lo);
    for (int k = 0; k < cfg.guided_samples; ++k) {
        const double t = static_cast<double>(k) / (cfg.guided_samples - 1);
        const Index n = static_cast<Index>(std::llround(static_cast<double>(w.lo) * std::pow(ratio, t)));
        mm.eval(std::clamp(n, w.lo, w.hi));
    }

    // Local maxima of the sampled sequence, best first.
    std::vector<std::pair<Index, double>> pts;
    for (const auto& [n, v] : mm.values()) {
        if (n >= w.lo && n <= w.hi) pts.emplace_back(n, v);
    }
    struct Bracket {
        double value;
        Index lo;
        Index hi;
    };
    std::vector<Bracket> brackets;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const bool left_ok = i == 0 || pts[i].second >= pts[i - 1].second;
        const bool right_ok = i + 1 == pts.size() || pts[i].second >= pts[i + 1].second;
        if (!left_ok || !right_ok) continue;
        const Index lo = i == 0 ? w.lo : pts[i - 1].first;
        const Index hi = i + 1 == pts.size() ? w.hi : pts[i + 1].first;
        if (hi - lo > 2) brackets.push_back({pts[i].second, lo, hi});
    }
    std::sort(brackets.begin(), brackets.end(), [](const Bracket& x, const Bracket& y) { return x.value > y.value; });
    constexpr std::size_t kMaxRefinements = 8;
    for (std::size_t i = 0; i < std::min(brackets.size(), kMaxRefinements); ++i) {
        mm.refine(brackets[i].lo, brackets[i].hi);
    }
}

}  // namespace

GlobalNorm global_resolvent_norm(const SystemParams& params, const SpectrumModel& spectrum, double lambda,
                                 const ScanConfig& config) {
    if (params.is_undamped()) {
        throw InvalidArgument("global_resolvent_norm", "requires positive damping (gamma > 0)");
    }
    if (!std::isfinite(lambda)) throw InvalidArgument("global_resolvent_norm", "lambda must be finite");
    const double lam = std::abs(lambda);  // R(-lambda) = R(lambda)
    ModeMaximizer mm(params, spectrum, lam);

    const Index last = spectrum.size().value_or(config.baseline_modes);
    mm.eval_range(1, std::min(config.baseline_modes, last));
    if (spectrum.is_finite()) mm.eval(last);

    const Window w = resonance_window(params, spectrum, lam, config.window_factor);
    if (!w.empty()) {
        if (w.count() <= config.exhaustive_limit) {
            mm.eval_range(w.lo, w.hi);
        } else {
            guided_search(mm, params, spectrum, lam, w, config);
        }
    }
    return mm.result();
}

std::vector<double> log_grid(double lo, double hi, int points) {
    if (!(lo > 0.0) || !(lo < hi) || points < 2) {
        throw InvalidArgument("log_grid", "need 0 < lo < hi and at least 2 points");
    }
    std::vector<double> grid(static_cast<std::size_t>(points));
    const double llo = std::log(lo);
    const double step = (std::log(hi) - llo) / (points - 1);
    for (int j = 0; j < points; ++j) grid[static_cast<std::size_t>(j)] = std::exp(llo + step * j);
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

namespace {

// Golden-section maximization of the single-mode norm in [lo, hi].
double refine_modal_peak(const SystemParams& params, double omega, double lo, double hi) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = modal_resolvent_norm(params, omega, x1);
    double f2 = modal_resolvent_norm(params, omega, x2);
    for (int it = 0; it < 60 && (hi - lo) > 1e-13 * hi; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = modal_resolvent_norm(params, omega, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = modal_resolvent_norm(params, omega, x1);
        }
    }
    return f1 > f2 ? x1 : x2;
}

ResolventSample peak_sample(const SystemParams& params, const SpectrumModel& spectrum, double lambda,
                            double cell_lo, double cell_hi, const ScanConfig& config) {
    const auto evaluate = [&](double lam) {
        const GlobalNorm g = global_resolvent_norm(params, spectrum, lam, config);
        return ResolventSample{lam, g.norm, g.mode_index, g.omega, g.modes_examined};
    };
    ResolventSample best = evaluate(lambda);
    const Index size = spectrum.size().value_or(0);
    const double l2 = lambda * lambda;
    for (const double c : {params.a(), params.b(), params.alpha_avg()}) {
        const Index below = spectrum.last_at_or_below(l2 / c);
        for (const Index n : {below, below + 1}) {
            if (n < 1 || (size > 0 && n > size)) continue;
            const double omega = spectrum.mode_at(n);
            const ModalBlock blk = build_modal_block(params, omega);
            for (const Complex mu : smallmat::eigenvalues(blk.weighted)) {
                if (!(mu.imag() > 0.0)) continue;
                const double half = 4.0 * std::abs(mu.real()) + 1e-12 * mu.imag();
                const double lo = std::max({0.5 * mu.imag(), mu.imag() - half, cell_lo});
                const double hi = std::min(mu.imag() + half, cell_hi);
                if (!(lo < hi)) continue;
                const double peak = refine_modal_peak(params, omega, lo, hi);
                const ResolventSample s = evaluate(peak);
                if (s.norm > best.norm) best = s;
            }
        }
    }
    return best;
}

}  // namespace

ResolventScan scan(const SystemParams& params, const SpectrumModel& spectrum, const ScanConfig& config) {
    config.validate();
    const std::vector<double> grid = log_grid(config.lambda_min, config.lambda_max, config.points);
    ResolventScan out;
    out.truncated_spectrum = spectrum.is_finite();
    out.grid_lo = config.lambda_min;
    out.grid_hi = config.lambda_max;
    out.samples.resize(grid.size());
    const double half_step = std::sqrt(grid[1] / grid[0]);
    parallel_for(grid.size(), [&](std::size_t j) {
        if (config.resolve_peaks) {
            const double lo = std::max(config.lambda_min, grid[j] / half_step);
            const double hi = std::min(config.lambda_max, grid[j] * half_step);
            out.samples[j] = peak_sample(params, spectrum, grid[j], lo, hi, config);
        } else {
            const GlobalNorm g = global_resolvent_norm(params, spectrum, grid[j], config);
            out.samples[j] = {grid[j], g.norm, g.mode_index, g.omega, g.modes_examined};
        }
    });
    return out;
}

}  // namespace modalres
