#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace modalres {

using Index = std::int64_t;

/**
 * Constants of the coupled damped system
 *
 *   y'' + a A y + gamma A^theta (y' + z') = 0
 *   z'' + b A z + gamma A^theta (y' + z') = 0
 *
 * alpha_avg = (a+b)/2 and beta_half = (a-b)/2 are kept in sync with a and b.
 * The undamped variant (gamma treated as exactly zero) exists only for the
 * conservative-case checks; scans, witnesses and certification reject it.
 */
class SystemParams {
public:
    static SystemParams make(double a, double b, double gamma, double theta);
    static SystemParams undamped(double a, double b, double theta = 0.0);

    double a() const { return a_; }
    double b() const { return b_; }
    double gamma() const { return undamped_ ? 0.0 : gamma_; }
    double theta() const { return theta_; }
    double alpha_avg() const { return 0.5 * (a_ + b_); }
    double beta_half() const { return 0.5 * (a_ - b_); }
    bool is_undamped() const { return undamped_; }

    /// gamma * omega^theta, evaluated as gamma * exp(theta * ln omega).
    double damping(double omega) const;

private:
    SystemParams(double a, double b, double gamma, double theta, bool undamped)
        : a_(a), b_(b), gamma_(gamma), theta_(theta), undamped_(undamped) {}

    double a_;
    double b_;
    double gamma_;
    double theta_;
    bool undamped_;
};

/**
 * Eigenvalue sequence omega_1 <= omega_2 <= ... of the operator A.
 *
 * Explicit lists are finite truncations of the true spectrum. Repeated values
 * are accepted: a multiple eigenvalue contributes identical modal blocks, so
 * every supremum over modes is unchanged by multiplicity.
 * Indices are 1-based throughout.
 */
class SpectrumModel {
public:
    enum class Kind { Explicit, PowerLaw };

    static SpectrumModel explicit_values(std::vector<double> values);
    static SpectrumModel power_law(double scale, double exponent);

    Kind kind() const { return kind_; }
    bool is_finite() const { return kind_ == Kind::Explicit; }
    /// Number of available modes; nullopt for the unbounded power law.
    std::optional<Index> size() const;

    double scale() const { return scale_; }
    double exponent() const { return exponent_; }
    std::span<const double> values() const { return values_; }

    /// omega_n; throws IndexError outside [1, size].
    double mode_at(Index n) const;

    /// Smallest n with omega_n >= x. For explicit lists returns size()+1 when
    /// no such mode exists.
    Index first_at_or_above(double x) const;
    /// Largest n with omega_n <= x, or 0 if none.
    Index last_at_or_below(double x) const;

private:
    SpectrumModel() = default;

    Kind kind_ = Kind::Explicit;
    std::vector<double> values_;
    double scale_ = 1.0;
    double exponent_ = 1.0;
};

/// Dirichlet Laplacian on (0, length): omega_n = (n pi / length)^2.
SpectrumModel make_membrane_spectrum(double length, Index count);
/// Clamped-plate 1-D surrogate: omega_n = (n pi / length)^4.
SpectrumModel make_plate_spectrum(double length, Index count);

inline double mode_at(const SpectrumModel& s, Index n) { return s.mode_at(n); }

}  // namespace modalres
