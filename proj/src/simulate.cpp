#include "modalres/simulate.hpp"

#include <cmath>

#include "modalres/asymptotics.hpp"
#include "modalres/errors.hpp"
#include "modalres/parallel.hpp"

namespace modalres {

double InitialData::hnorm(const SystemParams& params) const {
    double sum = 0.0;
    for (const auto& t : terms) sum += hnorm_squared(params, t.state);
    return std::sqrt(sum);
}

InitialData smooth_profile(const SpectrumModel& spectrum, Index modes) {
    if (modes < 1) throw InvalidArgument("smooth_profile", "need at least one mode");
    InitialData data;
    for (Index n = 1; n <= modes; ++n) {
        const double omega = spectrum.mode_at(n);
        data.terms.push_back({n, ModalState{omega, 1.0 / omega, 0.0, 1.0 / omega, 0.0}});
    }
    return data;
}

namespace {

void validate_times(const std::vector<double>& times, const char* who) {
    if (times.empty() || times.front() != 0.0) throw InvalidArgument(who, "time grid must start at 0");
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) throw InvalidArgument(who, "time grid must be strictly increasing");
    }
}

std::vector<BlockVec> evolve_term(const SystemParams& params, const ModalTerm& term, const std::vector<double>& times) {
    const ModalBlock blk = build_modal_block(params, term.state.omega);
    const BlockVec y0 = to_weighted(params, term.state);
    std::vector<BlockVec> out;
    out.reserve(times.size());
    for (const double t : times) {
        out.push_back(t == 0.0 ? y0 : BlockVec(smallmat::expm(blk.weighted, t) * y0));
    }
    return out;
}

}  // namespace

Trace evolve(const SystemParams& params, const InitialData& data, const std::vector<double>& times, bool per_mode) {
    validate_times(times, "evolve");
    const std::size_t nt = times.size();
    std::vector<std::vector<double>> sq(data.terms.size());
    parallel_for(data.terms.size(), [&](std::size_t k) {
        const auto states = evolve_term(params, data.terms[k], times);
        sq[k].resize(nt);
        for (std::size_t j = 0; j < nt; ++j) sq[k][j] = states[j].squaredNorm();
    });

    Trace tr;
    tr.times = times;
    tr.damped = !params.is_undamped();
    tr.total_norm.assign(nt, 0.0);
    for (const auto& mode : sq) {
        for (std::size_t j = 0; j < nt; ++j) tr.total_norm[j] += mode[j];
    }
    for (auto& v : tr.total_norm) v = std::sqrt(v);
    if (per_mode) {
        for (auto& mode : sq) {
            for (auto& v : mode) v = std::sqrt(v);
        }
        tr.mode_norms = std::move(sq);
    }

    double graph = 0.0;
    for (const auto& term : data.terms) {
        const ModalBlock blk = build_modal_block(params, term.state.omega);
        const BlockVec y0 = to_weighted(params, term.state);
        graph += y0.squaredNorm() + (blk.weighted * y0).squaredNorm();
    }
    tr.graph_norm = std::sqrt(graph);
    return tr;
}

InitialData state_at(const SystemParams& params, const InitialData& data, double t) {
    InitialData out;
    out.terms.reserve(data.terms.size());
    for (const auto& term : data.terms) {
        const ModalBlock blk = build_modal_block(params, term.state.omega);
        const BlockVec y = smallmat::expm(blk.weighted, t) * to_weighted(params, term.state);
        out.terms.push_back({term.n, from_weighted(params, term.state.omega, y)});
    }
    return out;
}

double dissipation(const SystemParams& params, const InitialData& data) {
    double sum = 0.0;
    for (const auto& t : data.terms) sum += dissipativity_form(params, t.state);
    return sum;
}

Trace sync_check(const SystemParams& params, const InitialData& data, const std::vector<double>& times) {
    if (params.a() != params.b()) throw InvalidArgument("sync_check", "requires a == b");
    Trace tr = evolve(params, data, times);
    std::vector<double> q(times.size(), 0.0), p(times.size(), 0.0);
    for (const auto& term : data.terms) {
        const auto states = evolve_term(params, term, times);
        // With a == b the weights of u and w coincide, so q and p are plain
        // differences and sums of weighted coordinates.
        for (std::size_t j = 0; j < times.size(); ++j) {
            const BlockVec& y = states[j];
            q[j] += std::norm(y(0) - y(2)) + std::norm(y(1) - y(3));
            p[j] += std::norm(y(0) + y(2)) + std::norm(y(1) + y(3));
        }
    }
    for (auto& v : q) v = std::sqrt(v);
    for (auto& v : p) v = std::sqrt(v);
    tr.q_norm = std::move(q);
    tr.p_norm = std::move(p);
    return tr;
}

DecayFit fit_decay(const Trace& trace, DecayModel model) {
    const std::size_t n = trace.times.size();
    if (n < 16 || trace.total_norm.size() != n) {
        throw InvalidArgument("fit_decay", "trace needs at least 16 samples");
    }
    if (trace.damped && !(trace.total_norm.back() < trace.total_norm.front())) {
        throw InternalInconsistency("fit_decay", "damped trace does not decay");
    }
    std::vector<double> x(n), y(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double norm = trace.total_norm[j];
        if (!(norm > 0.0)) throw InvalidArgument("fit_decay", "norms must be positive");
        if (model == DecayModel::Exponential) {
            x[j] = trace.times[j];
            y[j] = std::log(norm);
        } else {
            if (!(trace.graph_norm > 0.0)) throw InvalidArgument("fit_decay", "graph norm must be positive");
            x[j] = std::log1p(trace.times[j]);
            y[j] = std::log(norm / trace.graph_norm);
        }
    }
    const LineFit line = least_squares_line(x, y);
    return {-line.slope, line.residual};
}

Abscissa spectral_abscissa(const SystemParams& params, const SpectrumModel& spectrum, Index n_max) {
    if (n_max < 1) throw InvalidArgument("spectral_abscissa", "n_max must be >= 1");
    const Index last = std::min(n_max, spectrum.size().value_or(n_max));
    Abscissa best{-HUGE_VAL, 0};
    for (Index n = 1; n <= last; ++n) {
        const ModalBlock blk = build_modal_block(params, spectrum.mode_at(n));
        double re = -HUGE_VAL;
        // A skew-Hermitian block (no damping) has a purely imaginary spectrum.
        const bool skew = (blk.weighted + blk.weighted.adjoint()).isZero(0.0);
        for (const Complex mu : smallmat::eigenvalues(blk.weighted)) re = std::max(re, skew ? 0.0 : mu.real());
        if (re > best.value) best = {re, n};
    }
    return best;
}

}  // namespace modalres
