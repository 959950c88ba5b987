#pragma once

#include <vector>

#include "modalres/spectral_model.hpp"

namespace modalres {

/**
 * Frequency grid and mode-selection settings.
 *
 * For each lambda only modes with omega in
 *   [lambda^2 / (K max(a,b)), K lambda^2 / min(a,b)]
 * plus the first `baseline_modes` (and the last mode of an explicit list) are
 * candidates for the supremum. Windows holding at most `exhaustive_limit`
 * modes are enumerated; larger windows are searched around the three
 * resonance indices (lambda^2 = a w, b w, (a+b)/2 w) plus a geometric sample
 * refined by integer ternary search.
 */
struct ScanConfig {
    double lambda_min = 1.0;
    double lambda_max = 1e3;
    int points = 64;
    double window_factor = 10.0;
    Index baseline_modes = 8;

    Index exhaustive_limit = 4096;
    int guided_samples = 512;
    Index resonance_halo = 32;

    /// Replace each grid value by the nearest resonance peak of R (see scan()).
    bool resolve_peaks = false;

    void validate() const;
};

struct GlobalNorm {
    double norm = 0.0;
    Index mode_index = 0;
    double omega = 0.0;
    Index modes_examined = 0;
};

struct ResolventSample {
    double lambda = 0.0;
    double norm = 0.0;
    Index mode_index = 0;
    double omega = 0.0;
    Index modes_examined = 0;
};

struct ResolventScan {
    std::vector<ResolventSample> samples;
    /// True when the spectrum is an explicit list, i.e. the sup is over the
    /// available modes only.
    bool truncated_spectrum = false;
    /// Requested grid end points; 0 when the scan was assembled by hand.
    double grid_lo = 0.0;
    double grid_hi = 0.0;

    std::vector<double> lambdas() const;
    std::vector<double> norms() const;
};

/// sup over candidate modes of |(i lambda - A)^-1| restricted to each mode.
GlobalNorm global_resolvent_norm(const SystemParams& params, const SpectrumModel& spectrum, double lambda,
                                 const ScanConfig& config);

/// Log-spaced grid with exact endpoints.
std::vector<double> log_grid(double lo, double hi, int points);

/**
 * Evaluates the global resolvent norm on a log-spaced lambda grid.
 *
 * With resolve_peaks set, every grid value lambda_j is replaced by a damped
 * resonance frequency in its grid cell (half a log step either side, clipped
 * to [lambda_min, lambda_max]; Im of a block eigenvalue of the modes resonating
 * at lambda_j, refined to the local maximum of the modal norm) when that gives
 * a larger norm. The reported lambda is then the peak location.
 * This samples the upper envelope of R, which is what limsup statements
 * concern when resonances are much narrower than their spacing.
 */
ResolventScan scan(const SystemParams& params, const SpectrumModel& spectrum, const ScanConfig& config);

}  // namespace modalres
