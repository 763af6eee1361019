#include "chiral/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace chiral {

double ExcitationState::trace() const {
    double t = 0.0;
    for (const auto& b : branches) t += b.weight * b.amplitudes.squaredNorm();
    return t;
}

CMat ExcitationState::density_matrix() const {
    CMat rho = CMat::Zero(dim(), dim());
    for (const auto& b : branches) rho += b.weight * b.amplitudes * b.amplitudes.adjoint();
    return rho;
}

ExcitationState initial_state(Eigen::Index n_sites, Eigen::Index site, double p_up) {
    if (n_sites < 1) throw ValidationError("initial state needs at least one site");
    if (site < 0 || site >= n_sites)
        throw ValidationError("initial site " + std::to_string(site) + " out of range [0, " +
                              std::to_string(n_sites) + ")");
    if (!(p_up >= 0.0 && p_up <= 1.0)) throw ValidationError("p_up must lie in [0, 1]");
    ExcitationState state;
    for (Spin s : {Spin::Up, Spin::Down}) {
        const double w = s == Spin::Up ? p_up : 1.0 - p_up;
        if (w == 0.0) continue;
        CVec a = CVec::Zero(2 * n_sites);
        a(basis_index(site, s)) = 1.0;
        state.branches.push_back({w, std::move(a)});
    }
    return state;
}

Propagator::Propagator(const EffectiveHamiltonian& h, double condition_limit, double fallback_step)
    : h_(h.matrix), step_(fallback_step) {
    Eigen::ComplexEigenSolver<CMat> es(h_, true);
    bool ok = es.info() == Eigen::Success;
    if (ok) {
        vectors_ = es.eigenvectors();
        eigenvalues_ = es.eigenvalues();
        Eigen::JacobiSVD<CMat> svd(vectors_);
        const auto& sv = svd.singularValues();
        const double smin = sv(sv.size() - 1);
        condition_ = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
        ok = std::isfinite(condition_) && condition_ <= condition_limit;
    } else {
        condition_ = std::numeric_limits<double>::infinity();
    }
    if (ok) {
        inverse_ = vectors_.partialPivLu().inverse();
    } else {
        method_ = PropagationMethod::TimeStepping;
    }
}

CVec Propagator::apply(const CVec& a0, double t) const {
    if (method_ == PropagationMethod::TimeStepping) return rk4(a0, t);
    const CVec phases = (-I * t * eigenvalues_.array()).exp().matrix();
    return vectors_ * phases.cwiseProduct(inverse_ * a0);
}

CVec Propagator::rk4(const CVec& a0, double t) const {
    if (t <= 0.0) return a0;
    const auto steps = static_cast<long>(std::ceil(t / step_));
    const double dt = t / static_cast<double>(steps);
    CVec a = a0;
    for (long s = 0; s < steps; ++s) {
        const CVec k1 = -I * (h_ * a);
        const CVec k2 = -I * (h_ * (a + 0.5 * dt * k1));
        const CVec k3 = -I * (h_ * (a + 0.5 * dt * k2));
        const CVec k4 = -I * (h_ * (a + dt * k3));
        a += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return a;
}

std::vector<ExcitationState> Propagator::evolve_states(const ExcitationState& state,
                                                       const std::vector<double>& times) const {
    if (!std::is_sorted(times.begin(), times.end()))
        throw ValidationError("output times must be sorted");
    if (!times.empty() && times.front() < state.time)
        throw ValidationError("output times must not precede the state time");
    std::vector<ExcitationState> out(times.size());
    const auto n = static_cast<long>(times.size());
    if (method_ == PropagationMethod::Spectral) {
#pragma omp parallel for schedule(static)
        for (long i = 0; i < n; ++i) {
            ExcitationState s{state.branches, times[i]};
            for (auto& b : s.branches) b.amplitudes = apply(b.amplitudes, times[i] - state.time);
            out[i] = std::move(s);
        }
        return out;
    }
    // Time stepping is sequential in t; branches are independent.
    ExcitationState current = state;
    for (long i = 0; i < n; ++i) {
        for (auto& b : current.branches) b.amplitudes = rk4(b.amplitudes, times[i] - current.time);
        current.time = times[i];
        out[i] = current;
    }
    return out;
}

Observables measure(const CMat& rho, std::span<const double> site_z) {
    const auto n_sites = rho.rows() / 2;
    if (static_cast<Eigen::Index>(site_z.size()) != n_sites)
        throw ValidationError("site coordinate count does not match state dimension");
    Observables o;
    o.site_up.resize(n_sites);
    o.site_down.resize(n_sites);
    double zw = 0.0;
    for (Eigen::Index i = 0; i < n_sites; ++i) {
        const double up = rho(basis_index(i, Spin::Up), basis_index(i, Spin::Up)).real();
        const double dn = rho(basis_index(i, Spin::Down), basis_index(i, Spin::Down)).real();
        o.site_up[i] = up;
        o.site_down[i] = dn;
        o.p_up += up;
        o.p_down += dn;
        zw += site_z[i] * (up + dn);
    }
    o.trace = o.p_up + o.p_down;
    o.sz = o.p_up - o.p_down;
    o.z_com = o.trace > 0.0 ? zw / o.trace : 0.0;
    return o;
}

Observables measure(const ExcitationState& state, std::span<const double> site_z) {
    const auto n_sites = state.dim() / 2;
    if (static_cast<Eigen::Index>(site_z.size()) != n_sites)
        throw ValidationError("site coordinate count does not match state dimension");
    Observables o;
    o.site_up.assign(n_sites, 0.0);
    o.site_down.assign(n_sites, 0.0);
    for (const auto& b : state.branches) {
        for (Eigen::Index i = 0; i < n_sites; ++i) {
            o.site_up[i] += b.weight * std::norm(b.amplitudes(basis_index(i, Spin::Up)));
            o.site_down[i] += b.weight * std::norm(b.amplitudes(basis_index(i, Spin::Down)));
        }
    }
    double zw = 0.0;
    for (Eigen::Index i = 0; i < n_sites; ++i) {
        o.p_up += o.site_up[i];
        o.p_down += o.site_down[i];
        zw += site_z[i] * (o.site_up[i] + o.site_down[i]);
    }
    o.trace = o.p_up + o.p_down;
    o.sz = o.p_up - o.p_down;
    o.z_com = o.trace > 0.0 ? zw / o.trace : 0.0;
    return o;
}

namespace {

ObservableSeries collect(const std::vector<Observables>& obs, const std::vector<double>& times) {
    ObservableSeries s;
    s.times = times;
    for (const auto& o : obs) {
        s.trace.push_back(o.trace);
        s.p_up.push_back(o.p_up);
        s.p_down.push_back(o.p_down);
        s.sz.push_back(o.sz);
        s.z_com.push_back(o.z_com);
        s.site_up.push_back(o.site_up);
        s.site_down.push_back(o.site_down);
    }
    s.eta = helicity(s);
    return s;
}

}  // namespace

ObservableSeries evolve(const ExcitationState& state, const Propagator& prop, std::span<const double> site_z,
                        const std::vector<double>& times) {
    const auto states = prop.evolve_states(state, times);
    std::vector<Observables> obs(states.size());
    const auto n = static_cast<long>(states.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) obs[i] = measure(states[i], site_z);
    return collect(obs, times);
}

ObservableSeries evolve_serial(const ExcitationState& state, const Propagator& prop,
                               std::span<const double> site_z, const std::vector<double>& times) {
    if (!std::is_sorted(times.begin(), times.end()))
        throw ValidationError("output times must be sorted");
    std::vector<Observables> obs;
    obs.reserve(times.size());
    if (prop.method() == PropagationMethod::TimeStepping) {
        for (const auto& s : prop.evolve_states(state, times)) obs.push_back(measure(s, site_z));
        return collect(obs, times);
    }
    for (double t : times) {
        if (t < state.time) throw ValidationError("output times must not precede the state time");
        ExcitationState s{state.branches, t};
        for (auto& b : s.branches) b.amplitudes = prop.apply(b.amplitudes, t - state.time);
        obs.push_back(measure(s, site_z));
    }
    return collect(obs, times);
}

std::vector<Helicity> helicity(const ObservableSeries& series, double dead_band, int window) {
    const auto n = static_cast<long>(series.times.size());
    std::vector<Helicity> eta(series.times.size(), Helicity::Undefined);
    if (n < 2) return eta;
    window = std::max(window, 1);
    for (long i = 0; i < n; ++i) {
        const long lo = std::max(0L, i - window);
        const long hi = std::min(n - 1, i + window);
        const double dt = series.times[hi] - series.times[lo];
        if (dt <= 0.0) continue;
        const double v = (series.z_com[hi] - series.z_com[lo]) / dt;
        const double s = series.sz[i] * v;
        if (std::abs(s) > dead_band) eta[i] = s > 0.0 ? Helicity::Positive : Helicity::Negative;
    }
    return eta;
}

std::vector<double> uniform_times(double t_max, int points) {
    if (points < 1) throw ValidationError("time grid needs at least one point");
    if (!(t_max >= 0.0)) throw ValidationError("time grid end must be non-negative");
    std::vector<double> t(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) t[i] = points == 1 ? t_max : t_max * i / (points - 1);
    return t;
}

double arrival_time(const ObservableSeries& series, std::size_t site) {
    const auto n = series.times.size();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double p = series.site_up[i][site] + series.site_down[i][site];
        const double prev = series.site_up[i - 1][site] + series.site_down[i - 1][site];
        const double next = series.site_up[i + 1][site] + series.site_down[i + 1][site];
        if (p > prev && p >= next) return series.times[i];
    }
    return -1.0;
}

}  // namespace chiral
