#pragma once

#include <optional>

#include "modalres/modal_core.hpp"
#include "modalres/resolvent_scan.hpp"

namespace modalres {

/**
 * Unit-norm state Z_n = (a_n, i lambda_n a_n, c_n, i lambda_n c_n) on mode n
 * together with its residual |(i lambda_n - A) Z_n|. Since |Z_n| = 1, the
 * resolvent norm at lambda_n is at least 1 / residual.
 */
struct Witness {
    enum class Construction { NonAnalytic, PolyOpt };

    Construction construction = Construction::NonAnalytic;
    Index n = 0;  ///< mode index, 0 when built from a bare omega
    double omega = 0.0;
    double lambda = 0.0;
    ModalState state;
    double residual = 0.0;         ///< closed form
    double residual_direct = 0.0;  ///< energy norm of (i lambda - raw) Z applied explicitly
    double lower_bound = 0.0;      ///< 1 / residual
    Complex a_coef{};
    Complex c_coef{};

    // Non-analyticity construction only.
    double alpha0 = 0.0;
    double beta0 = 0.0;
    double r_n = 0.0;
    double zeta_n = 0.0;

    /// theta lies outside the range where the construction's conclusion holds
    /// ((1/2, 1] for NonAnalytic). The algebra itself is still valid.
    bool outside_theorem_range = false;

    double hnorm_error(const SystemParams& params) const;
};

/**
 * Witness at lambda_n = sqrt((a+b)/2 omega_n) showing |lambda|^r R is unbounded
 * for r > 2(1 - theta) when theta in (1/2, 1].
 *
 * a_n = -i k c_n / (beta + i k) with k = sqrt(alpha) gamma omega^(theta - 1/2),
 * sqrt(omega) c_n = alpha_n + i beta_n, alpha_n = alpha0 + r_n, beta_n = beta0 + r_n,
 * alpha0 = beta0 = 1/sqrt(4(a+b)), and r_n the root of
 * 2 r^2 + 2(alpha0 + beta0) r - zeta_n = 0 that tends to zero.
 */
Witness witness_nonanalytic(const SystemParams& params, double omega_n);

/**
 * Witness at lambda_n = sqrt(a omega_n), theta in [-1, 1/2]:
 * a_n = -(1 + 2 i beta a^-1/2 gamma^-1 omega^(1/2 - theta)) c_n with c_n > 0 and
 * |c_n| = omega^(theta-1) / sqrt((3a+b) omega^(2 theta - 1) + 8 beta^2 / gamma^2).
 * The residual 2 |beta| omega |c_n| lives entirely in the v component.
 */
Witness witness_polyopt(const SystemParams& params, double omega_n);

/// Builds the witness for mode n of the spectrum and records the index.
Witness witness_for_mode(const SystemParams& params, const SpectrumModel& spectrum, Index n,
                         Witness::Construction construction);

/**
 * Returns 1 / residual after checking it does not exceed the modal resolvent
 * norm at (omega_n, lambda_n), and, when a spectrum is given, the global norm.
 * A violation (beyond 1e-8 relative slack) throws InternalInconsistency.
 */
double certify_lower_bound(const SystemParams& params, const Witness& w);
double certify_lower_bound(const SystemParams& params, const Witness& w, const SpectrumModel& spectrum,
                           const ScanConfig& config);

}  // namespace modalres
