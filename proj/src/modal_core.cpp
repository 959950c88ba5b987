#include "modalres/modal_core.hpp"

#include <cmath>
#include <limits>

#include "modalres/errors.hpp"

namespace modalres {

namespace {

// sigma_min below this multiple of |M| is indistinguishable from a singular
// shifted block in double precision.
constexpr double kSingularRatio = 64.0 * std::numeric_limits<double>::epsilon();

void require_omega(double omega, const char* who) {
    if (!(omega > 0.0) || !std::isfinite(omega)) throw InvalidArgument(who, "omega must be positive");
}

}  // namespace

double hnorm_squared(const SystemParams& params, const ModalState& s) {
    return params.a() * s.omega * std::norm(s.u) + std::norm(s.v) +
           params.b() * s.omega * std::norm(s.w) + std::norm(s.z);
}

double hnorm(const SystemParams& params, const ModalState& s) {
    return std::sqrt(hnorm_squared(params, s));
}

Eigen::Vector4d weight_diagonal(const SystemParams& params, double omega) {
    return {std::sqrt(params.a() * omega), 1.0, std::sqrt(params.b() * omega), 1.0};
}

BlockVec to_weighted(const SystemParams& params, const ModalState& state) {
    return weight_diagonal(params, state.omega).cast<Complex>().cwiseProduct(state.coords());
}

ModalState from_weighted(const SystemParams& params, double omega, const BlockVec& y) {
    const Eigen::Vector4d d = weight_diagonal(params, omega);
    return ModalState::from_coords(omega, y.cwiseQuotient(d.cast<Complex>()));
}

ModalBlock build_modal_block(const SystemParams& params, double omega) {
    require_omega(omega, "build_modal_block");
    const double aw = params.a() * omega;
    const double bw = params.b() * omega;
    const double d = params.damping(omega);

    ModalBlock blk;
    blk.omega = omega;
    blk.raw << 0.0, 1.0, 0.0, 0.0,
               -aw, -d, 0.0, -d,
               0.0, 0.0, 0.0, 1.0,
               0.0, -d, -bw, -d;

    const double sa = std::sqrt(aw);
    const double sb = std::sqrt(bw);
    blk.weighted << 0.0, sa, 0.0, 0.0,
                    -sa, -d, 0.0, -d,
                    0.0, 0.0, 0.0, sb,
                    0.0, -d, -sb, -d;
    return blk;
}

double dissipativity_form(const SystemParams& params, const ModalState& state) {
    require_omega(state.omega, "dissipativity_form");
    return -params.damping(state.omega) * std::norm(state.v + state.z);
}

double modal_resolvent_norm(const SystemParams& params, double omega, double lambda) {
    require_omega(omega, "modal_resolvent_norm");
    const ModalBlock blk = build_modal_block(params, omega);
    Block shifted = -blk.weighted;
    shifted.diagonal().array() += Complex(0.0, lambda);
    const auto sv = smallmat::singular_values(shifted);
    const double smax = sv(0);
    const double smin = sv(3);
    if (smin <= kSingularRatio * smax) {
        if (params.is_undamped()) return std::numeric_limits<double>::infinity();
        throw InternalInconsistency("modal_resolvent_norm",
                                    "shifted block is singular although damping is positive");
    }
    return 1.0 / smin;
}

ModalState modal_solve(const SystemParams& params, double omega, double lambda, const ModalState& rhs) {
    require_omega(omega, "modal_solve");
    // Solved in weighted coordinates, where the system is well scaled.
    const ModalBlock blk = build_modal_block(params, omega);
    Block shifted = -blk.weighted;
    shifted.diagonal().array() += Complex(0.0, lambda);
    const auto sv = smallmat::singular_values(shifted);
    if (sv(3) <= kSingularRatio * sv(0)) {
        throw SingularMatrix("modal_solve", "i lambda is an eigenvalue of the modal block");
    }
    ModalState scaled = rhs;
    scaled.omega = omega;
    const BlockVec y = smallmat::solve(shifted, to_weighted(params, scaled));
    return from_weighted(params, omega, y);
}

ModalState apply_shifted(const SystemParams& params, double omega, double lambda, const ModalState& state) {
    const ModalBlock blk = build_modal_block(params, omega);
    const BlockVec x = state.coords();
    return ModalState::from_coords(omega, Complex(0.0, lambda) * x - blk.raw * x);
}

}  // namespace modalres
