#include "chiral/dynamics.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>

namespace chiral {

namespace {

using OdeState = std::vector<cplx>;

double max_difference(const Observables& a, const Observables& b) {
    double d = std::max({std::abs(a.trace - b.trace), std::abs(a.p_up - b.p_up), std::abs(a.p_down - b.p_down),
                         std::abs(a.sz - b.sz), std::abs(a.z_com - b.z_com)});
    for (std::size_t i = 0; i < a.site_up.size(); ++i) {
        d = std::max(d, std::abs(a.site_up[i] - b.site_up[i]));
        d = std::max(d, std::abs(a.site_down[i] - b.site_down[i]));
    }
    return d;
}

}  // namespace

MasterEquationReport master_equation_check(const ExcitationState& state, const CouplingTensor& coupling,
                                           bool hermitian_only, double t, std::span<const double> site_z,
                                           int samples) {
    const Eigen::Index dim = state.dim();
    if (dim / 2 > 8) throw ValidationError("master equation check is limited to N <= 8 emitters");
    if (dim != coupling.coherent.rows()) throw ValidationError("state and coupling dimensions differ");
    if (samples < 1 || !(t > 0.0)) throw ValidationError("master equation check needs t > 0 and samples >= 1");

    const EffectiveHamiltonian heff = effective(coupling, hermitian_only);
    const CMat& h = heff.matrix;
    const CMat h_dag = h.adjoint();

    const CMat rho0 = state.density_matrix();
    OdeState y(rho0.data(), rho0.data() + rho0.size());
    const double trace0 = rho0.trace().real();

    auto rhs = [&](const OdeState& x, OdeState& dxdt, double) {
        Eigen::Map<const CMat> rho(x.data(), dim, dim);
        Eigen::Map<CMat> out(dxdt.data(), dim, dim);
        out.noalias() = -I * (h * rho - rho * h_dag);
    };

    std::vector<double> sample_times(static_cast<std::size_t>(samples));
    for (int s = 0; s < samples; ++s) sample_times[s] = state.time + t * (s + 1) / samples;

    const Propagator prop(heff);
    const auto branch_states = prop.evolve_states(state, sample_times);

    namespace ode = boost::numeric::odeint;
    auto stepper = ode::make_controlled(1e-13, 1e-13, ode::runge_kutta_dopri5<OdeState>());

    MasterEquationReport report;
    double t_now = state.time;
    for (int s = 0; s < samples; ++s) {
        const double target = sample_times[s];
        ode::integrate_adaptive(stepper, rhs, y, t_now, target, 1e-3);
        t_now = target;
        Eigen::Map<const CMat> rho(y.data(), dim, dim);
        const Observables direct = measure(CMat(rho), site_z);
        const Observables branched = measure(branch_states[s], site_z);
        report.deviation = std::max(report.deviation, max_difference(direct, branched));
        report.norm_drift = std::max(report.norm_drift, std::abs(direct.trace - trace0));
    }
    return report;
}

}  // namespace chiral
