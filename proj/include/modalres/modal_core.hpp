#pragma once

#include <Eigen/Core>

#include <complex>

#include "modalres/smallmat.hpp"
#include "modalres/spectral_model.hpp"

namespace modalres {

using Block = Eigen::Matrix4cd;
using BlockVec = Eigen::Vector4cd;

/// One mode of a state (u, v, w, z) expressed against the eigenfunction e_n.
struct ModalState {
    double omega = 1.0;
    Complex u{};
    Complex v{};
    Complex w{};
    Complex z{};

    BlockVec coords() const { return {u, v, w, z}; }
    static ModalState from_coords(double omega, const BlockVec& x) {
        return {omega, x(0), x(1), x(2), x(3)};
    }
};

/// Energy norm: sqrt(a w |u|^2 + |v|^2 + b w |w|^2 + |z|^2).
double hnorm(const SystemParams& params, const ModalState& state);
double hnorm_squared(const SystemParams& params, const ModalState& state);

/// D = diag(sqrt(a w), 1, sqrt(b w), 1); the energy norm is |D x|_2.
Eigen::Vector4d weight_diagonal(const SystemParams& params, double omega);
BlockVec to_weighted(const SystemParams& params, const ModalState& state);
ModalState from_weighted(const SystemParams& params, double omega, const BlockVec& y);

/**
 * Restriction of the generator to span{e_n}.
 *
 * raw acts on (u, v, w, z); weighted = D raw D^-1, in which the energy norm is
 * Euclidean and the block is a skew part plus the rank-one damping.
 */
struct ModalBlock {
    double omega = 1.0;
    Block raw;
    Block weighted;
};

ModalBlock build_modal_block(const SystemParams& params, double omega);

/// Re <A Z, Z> on one mode: -gamma w^theta |v + z|^2.
double dissipativity_form(const SystemParams& params, const ModalState& state);

/**
 * |(i lambda - A)^-1| on one mode, computed as 1 / sigma_min(i lambda - weighted).
 *
 * Returns +infinity when i lambda is an eigenvalue of an undamped block. With
 * positive damping the imaginary axis is in the resolvent set, so a singular
 * shifted block throws InternalInconsistency.
 */
double modal_resolvent_norm(const SystemParams& params, double omega, double lambda);

/// Solves (i lambda - raw) Z = rhs.
ModalState modal_solve(const SystemParams& params, double omega, double lambda, const ModalState& rhs);

/// Applies (i lambda - raw) to a state.
ModalState apply_shifted(const SystemParams& params, double omega, double lambda, const ModalState& state);

}  // namespace modalres
