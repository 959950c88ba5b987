#include "modalres/spectral_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "modalres/errors.hpp"

namespace modalres {

namespace {

// Power-law indices beyond this are not representable without losing the
// integer spacing in double precision.
constexpr double kMaxPowerLawIndex = 1e15;

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

SystemParams SystemParams::make(double a, double b, double gamma, double theta) {
    if (!finite_positive(a) || !finite_positive(b)) {
        throw InvalidArgument("SystemParams", "stiffness constants a and b must be positive");
    }
    if (!finite_positive(gamma)) {
        throw InvalidArgument("SystemParams", "damping gain gamma must be positive");
    }
    if (!(theta >= -1.0 && theta <= 1.0)) {
        throw InvalidArgument("SystemParams", "theta must lie in [-1, 1]");
    }
    return SystemParams(a, b, gamma, theta, false);
}

SystemParams SystemParams::undamped(double a, double b, double theta) {
    if (!finite_positive(a) || !finite_positive(b)) {
        throw InvalidArgument("SystemParams", "stiffness constants a and b must be positive");
    }
    if (!(theta >= -1.0 && theta <= 1.0)) {
        throw InvalidArgument("SystemParams", "theta must lie in [-1, 1]");
    }
    return SystemParams(a, b, 0.0, theta, true);
}

double SystemParams::damping(double omega) const {
    if (undamped_) return 0.0;
    return gamma_ * std::exp(theta_ * std::log(omega));
}

SpectrumModel SpectrumModel::explicit_values(std::vector<double> values) {
    if (values.empty()) {
        throw InvalidArgument("SpectrumModel", "explicit spectrum must contain at least one value");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!finite_positive(values[i])) {
            throw InvalidArgument("SpectrumModel",
                                  "eigenvalue #" + std::to_string(i + 1) + " is not positive");
        }
        if (i > 0 && values[i] < values[i - 1]) {
            throw InvalidArgument("SpectrumModel",
                                  "eigenvalues must be sorted; value #" + std::to_string(i + 1) +
                                      " decreases");
        }
    }
    SpectrumModel s;
    s.kind_ = Kind::Explicit;
    s.values_ = std::move(values);
    return s;
}

SpectrumModel SpectrumModel::power_law(double scale, double exponent) {
    if (!finite_positive(scale) || !finite_positive(exponent)) {
        throw InvalidArgument("SpectrumModel", "power law needs scale > 0 and exponent > 0");
    }
    SpectrumModel s;
    s.kind_ = Kind::PowerLaw;
    s.scale_ = scale;
    s.exponent_ = exponent;
    return s;
}

std::optional<Index> SpectrumModel::size() const {
    if (kind_ == Kind::Explicit) return static_cast<Index>(values_.size());
    return std::nullopt;
}

double SpectrumModel::mode_at(Index n) const {
    if (n < 1) throw IndexError("mode_at", "mode index must be >= 1, got " + std::to_string(n));
    if (kind_ == Kind::Explicit) {
        if (n > static_cast<Index>(values_.size())) {
            throw IndexError("mode_at", "mode index " + std::to_string(n) +
                                            " exceeds the " + std::to_string(values_.size()) +
                                            " available modes");
        }
        return values_[static_cast<std::size_t>(n - 1)];
    }
    if (exponent_ == 1.0) return scale_ * static_cast<double>(n);
    if (exponent_ == 2.0) {
        const double m = static_cast<double>(n);
        return scale_ * m * m;
    }
    return scale_ * std::pow(static_cast<double>(n), exponent_);
}

Index SpectrumModel::first_at_or_above(double x) const {
    if (kind_ == Kind::Explicit) {
        auto it = std::lower_bound(values_.begin(), values_.end(), x);
        return static_cast<Index>(it - values_.begin()) + 1;
    }
    if (x <= mode_at(1)) return 1;
    const double guess = std::pow(x / scale_, 1.0 / exponent_);
    if (!(guess < kMaxPowerLawIndex)) {
        throw InvalidArgument("SpectrumModel", "requested eigenvalue lies beyond representable mode indices");
    }
    Index n = std::max<Index>(1, static_cast<Index>(std::ceil(guess)));
    while (n > 1 && mode_at(n - 1) >= x) --n;
    while (mode_at(n) < x) ++n;
    return n;
}

Index SpectrumModel::last_at_or_below(double x) const {
    if (kind_ == Kind::Explicit) {
        auto it = std::upper_bound(values_.begin(), values_.end(), x);
        return static_cast<Index>(it - values_.begin());
    }
    if (x < mode_at(1)) return 0;
    return first_at_or_above(std::nextafter(x, HUGE_VAL)) - 1;
}

namespace {

SpectrumModel dirichlet_powers(double length, Index count, int power, const char* who) {
    if (!finite_positive(length)) throw InvalidArgument(who, "length must be positive");
    if (count < 1) throw InvalidArgument(who, "mode count must be at least 1");
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(count));
    const double base = std::numbers::pi / length;
    const double unit = power == 2 ? base * base : (base * base) * (base * base);
    for (Index n = 1; n <= count; ++n) {
        const double m = static_cast<double>(n);
        values.push_back((power == 2 ? m * m : (m * m) * (m * m)) * unit);
    }
    return SpectrumModel::explicit_values(std::move(values));
}

}  // namespace

SpectrumModel make_membrane_spectrum(double length, Index count) {
    return dirichlet_powers(length, count, 2, "make_membrane_spectrum");
}

SpectrumModel make_plate_spectrum(double length, Index count) {
    return dirichlet_powers(length, count, 4, "make_plate_spectrum");
}

}  // namespace modalres
