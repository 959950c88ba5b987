#pragma once

#include <optional>
#include <vector>

#include "modalres/modal_core.hpp"

namespace modalres {

struct ModalTerm {
    Index n = 1;
    ModalState state;
};

/// Finite modal expansion of (y0, y1, z0, z1). Modes are orthogonal, so the
/// squared energy norm is the sum of the modal ones.
struct InitialData {
    std::vector<ModalTerm> terms;

    double hnorm(const SystemParams& params) const;
};

/// Initial data with u = w = 1/omega_n and v = z = 0 on modes 1..modes.
InitialData smooth_profile(const SpectrumModel& spectrum, Index modes);

struct Trace {
    std::vector<double> times;
    std::vector<double> total_norm;
    std::vector<std::vector<double>> mode_norms;  ///< [term][time]; empty unless requested
    std::optional<std::vector<double>> q_norm;    ///< energy of y - z (a == b only)
    std::optional<std::vector<double>> p_norm;    ///< energy of y + z (a == b only)
    double graph_norm = 0.0;                      ///< (|Z0|^2 + |A Z0|^2)^(1/2)
    bool damped = true;
};

/// state(t) = exp(t raw) state(0) per mode, evaluated in weighted coordinates.
Trace evolve(const SystemParams& params, const InitialData& data, const std::vector<double>& times,
             bool per_mode = false);

/// Evolves every term of `data` to time t.
InitialData state_at(const SystemParams& params, const InitialData& data, double t);

/// Sum of modal dissipation forms; d/dt |Z|^2 equals twice this value.
double dissipation(const SystemParams& params, const InitialData& data);

/**
 * For a == b the difference q = y - z solves the undamped equation, so its
 * energy a w |u - w|^2 + |v - z|^2 is conserved; the sum p = y + z is damped.
 * Throws InvalidArgument when a != b.
 */
Trace sync_check(const SystemParams& params, const InitialData& data, const std::vector<double>& times);

enum class DecayModel { Exponential, Polynomial };

struct DecayFit {
    double rate = 0.0;
    double residual = 0.0;
};

/**
 * Exponential: log |Z(t)| against t. Polynomial: log(|Z(t)| / graph norm)
 * against log(1 + t). Needs >= 16 samples; a damped trace whose norm does not
 * decrease throws InternalInconsistency.
 */
DecayFit fit_decay(const Trace& trace, DecayModel model);

struct Abscissa {
    double value = 0.0;
    Index mode_index = 0;
};

/// max over n <= n_max of the largest real part among the four block eigenvalues.
Abscissa spectral_abscissa(const SystemParams& params, const SpectrumModel& spectrum, Index n_max);

}  // namespace modalres
