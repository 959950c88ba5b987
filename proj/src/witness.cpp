#include "modalres/witness.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>

#include "modalres/errors.hpp"

namespace modalres {

namespace {

constexpr double kCertifySlack = 1e-8;

using Quad = boost::multiprecision::cpp_bin_float_quad;

// Minimal complex arithmetic usable with both double and Quad.
template <typename Real>
struct Cx {
    Real re{0};
    Real im{0};

    friend Cx operator+(const Cx& x, const Cx& y) { return {x.re + y.re, x.im + y.im}; }
    friend Cx operator-(const Cx& x, const Cx& y) { return {x.re - y.re, x.im - y.im}; }
    friend Cx operator-(const Cx& x) { return {-x.re, -x.im}; }
    friend Cx operator*(const Cx& x, const Cx& y) {
        return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
    }
    friend Cx operator*(const Real& s, const Cx& x) { return {s * x.re, s * x.im}; }
    friend Cx operator/(const Cx& x, const Cx& y) {
        const Real d = y.re * y.re + y.im * y.im;
        return {(x.re * y.re + x.im * y.im) / d, (x.im * y.re - x.re * y.im) / d};
    }
    Real norm2() const { return re * re + im * im; }
    Complex to_complex() const { return {static_cast<double>(re), static_cast<double>(im)}; }
};

template <typename Real>
struct Construction {
    Real lambda;
    Cx<Real> a_coef;
    Cx<Real> c_coef;
    Real residual;
    Real alpha0{0};
    Real beta0{0};
    Real r_n{0};
    Real zeta_n{0};
};

template <typename Real>
Real rpow(const Real& x, const Real& e) {
    using std::exp;
    using std::log;
    return exp(e * log(x));
}

template <typename Real>
Construction<Real> nonanalytic_core(const SystemParams& p, double omega_d) {
    using std::sqrt;
    const Real a = p.a(), b = p.b(), gamma = p.gamma(), theta = p.theta(), omega = omega_d;
    const Real alpha = (a + b) / 2;
    const Real beta = (a - b) / 2;

    Construction<Real> w;
    w.lambda = sqrt(alpha * omega);
    // k = sqrt(alpha) gamma omega^(theta - 1/2)
    const Real k = sqrt(alpha) * gamma * rpow(omega, Real(theta - Real(0.5)));
    const Real k2 = k * k;
    w.alpha0 = 1 / sqrt(4 * (a + b));
    w.beta0 = w.alpha0;
    const Real s0 = w.alpha0 + w.beta0;
    w.zeta_n = (a + alpha) * beta * beta / (4 * alpha * ((b + alpha) * beta * beta + 4 * alpha * k2));
    // Root r^+ of 2 r^2 + 2 s0 r - zeta = 0, in cancellation-free form.
    w.r_n = w.zeta_n / (s0 + sqrt(s0 * s0 + 2 * w.zeta_n));

    const Real sqrt_omega = sqrt(omega);
    w.c_coef = {(w.alpha0 + w.r_n) / sqrt_omega, (w.beta0 + w.r_n) / sqrt_omega};
    w.a_coef = (Cx<Real>{0, -k} * w.c_coef) / Cx<Real>{beta, k};
    // Only the z row survives: -beta^2 / (beta + i k) omega c_n.
    w.residual = beta * beta * omega * sqrt(w.c_coef.norm2()) / sqrt(beta * beta + k2);
    return w;
}

template <typename Real>
Construction<Real> polyopt_core(const SystemParams& p, double omega_d) {
    using std::abs;
    using std::sqrt;
    const Real a = p.a(), b = p.b(), gamma = p.gamma(), theta = p.theta(), omega = omega_d;
    const Real beta = (a - b) / 2;

    Construction<Real> w;
    w.lambda = sqrt(a * omega);
    const Real c_abs = rpow(omega, Real(theta - 1)) /
                       sqrt((3 * a + b) * rpow(omega, Real(2 * theta - 1)) + 8 * beta * beta / (gamma * gamma));
    w.c_coef = {c_abs, 0};
    const Real twist = 2 * beta / (sqrt(a) * gamma) * rpow(omega, Real(Real(0.5) - theta));
    w.a_coef = -(Cx<Real>{1, twist} * w.c_coef);
    // Only the v row survives: 2 beta omega c_n.
    w.residual = 2 * abs(beta) * omega * c_abs;
    return w;
}

// Energy norm of (i lambda - raw) Z for Z = (a_n, i lambda a_n, c_n, i lambda c_n),
// with raw applied row by row.
template <typename Real>
Real direct_residual(const SystemParams& p, double omega_d, const Construction<Real>& w) {
    using std::exp;
    using std::log;
    using std::sqrt;
    const Real omega = omega_d;
    const Real aw = Real(p.a()) * omega;
    const Real bw = Real(p.b()) * omega;
    const Real d = Real(p.gamma()) * rpow(omega, Real(p.theta()));
    const Cx<Real> il{0, w.lambda};
    const Cx<Real> u = w.a_coef, v = il * w.a_coef, x = w.c_coef, z = il * w.c_coef;
    const Cx<Real> r0 = il * u - v;
    const Cx<Real> r1 = il * v + aw * u + d * (v + z);
    const Cx<Real> r2 = il * x - z;
    const Cx<Real> r3 = il * z + bw * x + d * (v + z);
    return sqrt(aw * r0.norm2() + r1.norm2() + bw * r2.norm2() + r3.norm2());
}

void require_witness_params(const SystemParams& params, double omega, const char* who) {
    if (params.is_undamped()) throw InvalidArgument(who, "requires positive damping (gamma > 0)");
    if (params.beta_half() == 0.0) throw DegenerateParameters(who, "a and b must be distinct");
    if (!(omega > 0.0) || !std::isfinite(omega)) throw InvalidArgument(who, "omega must be positive");
}

template <typename Core>
Witness assemble(const SystemParams& params, double omega, Witness::Construction kind, Core&& core) {
    const Construction<double> c = core.template operator()<double>(params, omega);
    // The direct residual cancels terms of size |lambda|^2 |a_n| down to the
    // residual, so it is evaluated on a quadruple-precision rebuild of Z_n.
    const Construction<Quad> q = core.template operator()<Quad>(params, omega);

    Witness w;
    w.construction = kind;
    w.omega = omega;
    w.lambda = c.lambda;
    w.a_coef = c.a_coef.to_complex();
    w.c_coef = c.c_coef.to_complex();
    w.state = ModalState{omega, w.a_coef, Complex(0.0, w.lambda) * w.a_coef, w.c_coef,
                         Complex(0.0, w.lambda) * w.c_coef};
    w.residual = c.residual;
    w.residual_direct = static_cast<double>(direct_residual(params, omega, q));
    w.lower_bound = 1.0 / w.residual;
    w.alpha0 = c.alpha0;
    w.beta0 = c.beta0;
    w.r_n = c.r_n;
    w.zeta_n = c.zeta_n;
    return w;
}

}  // namespace

double Witness::hnorm_error(const SystemParams& params) const {
    return std::abs(hnorm(params, state) - 1.0);
}

Witness witness_nonanalytic(const SystemParams& params, double omega_n) {
    require_witness_params(params, omega_n, "witness_nonanalytic");
    Witness w = assemble(params, omega_n, Witness::Construction::NonAnalytic,
                         []<typename Real>(const SystemParams& p, double om) { return nonanalytic_core<Real>(p, om); });
    w.outside_theorem_range = !(params.theta() > 0.5);
    return w;
}

Witness witness_polyopt(const SystemParams& params, double omega_n) {
    require_witness_params(params, omega_n, "witness_polyopt");
    Witness w = assemble(params, omega_n, Witness::Construction::PolyOpt,
                         []<typename Real>(const SystemParams& p, double om) { return polyopt_core<Real>(p, om); });
    w.outside_theorem_range = !(params.theta() <= 0.5);
    return w;
}

Witness witness_for_mode(const SystemParams& params, const SpectrumModel& spectrum, Index n,
                         Witness::Construction construction) {
    const double omega = spectrum.mode_at(n);
    Witness w = construction == Witness::Construction::NonAnalytic ? witness_nonanalytic(params, omega)
                                                                   : witness_polyopt(params, omega);
    w.n = n;
    return w;
}

double certify_lower_bound(const SystemParams& params, const Witness& w) {
    if (!(w.residual > 0.0)) throw InvalidArgument("certify_lower_bound", "witness residual must be positive");
    const double bound = 1.0 / w.residual;
    const double modal = modal_resolvent_norm(params, w.omega, w.lambda);
    if (bound > modal * (1.0 + kCertifySlack)) {
        throw InternalInconsistency("certify_lower_bound",
                                    "witness bound exceeds the modal resolvent norm at lambda_n");
    }
    return bound;
}

double certify_lower_bound(const SystemParams& params, const Witness& w, const SpectrumModel& spectrum,
                           const ScanConfig& config) {
    const double bound = certify_lower_bound(params, w);
    const GlobalNorm g = global_resolvent_norm(params, spectrum, w.lambda, config);
    if (bound > g.norm * (1.0 + kCertifySlack)) {
        throw InternalInconsistency("certify_lower_bound",
                                    "witness bound exceeds the global resolvent norm at lambda_n");
    }
    return bound;
}

}  // namespace modalres
