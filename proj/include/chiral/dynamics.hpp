#ifndef CHIRAL_DYNAMICS_HPP
#define CHIRAL_DYNAMICS_HPP

#include "chiral/hamiltonian.hpp"
#include "chiral/types.hpp"

#include <span>
#include <vector>

namespace chiral {

struct Branch {
    double weight = 0.0;
    CVec amplitudes;
};

/// Single-excitation mixed state rho = sum_b p_b |a_b><a_b|.
struct ExcitationState {
    std::vector<Branch> branches;
    double time = 0.0;

    Eigen::Index dim() const { return branches.empty() ? 0 : branches.front().amplitudes.size(); }
    double trace() const;
    CMat density_matrix() const;
};

// Mixture p_up |up_site><up_site| + (1 - p_up) |down_site><down_site|;
// zero-weight branches are dropped.
ExcitationState initial_state(Eigen::Index n_sites, Eigen::Index site, double p_up);

enum class PropagationMethod { Spectral, TimeStepping };

/// exp(-i H_eff t) through the eigendecomposition H = V diag(lambda) V^-1.
/// When cond(V) exceeds `condition_limit` (or the solver fails) it falls
/// back to fixed-step RK4 with step `fallback_step`.
class Propagator {
public:
    explicit Propagator(const EffectiveHamiltonian& h, double condition_limit = 1e8,
                        double fallback_step = 1e-3);

    CVec apply(const CVec& a0, double t) const;

    // States at each requested time (sorted, >= state.time).
    std::vector<ExcitationState> evolve_states(const ExcitationState& state,
                                               const std::vector<double>& times) const;

    PropagationMethod method() const { return method_; }
    double condition_number() const { return condition_; }
    Eigen::Index dim() const { return h_.rows(); }
    const CVec& eigenvalues() const { return eigenvalues_; }

private:
    CVec rk4(const CVec& a0, double t) const;

    CMat h_;
    CMat vectors_;
    CMat inverse_;
    CVec eigenvalues_;
    double condition_ = 0.0;
    double step_ = 1e-3;
    PropagationMethod method_ = PropagationMethod::Spectral;
};

enum class Helicity : int { Negative = -1, Undefined = 0, Positive = 1 };

struct ObservableSeries {
    std::vector<double> times;
    std::vector<double> trace;
    std::vector<double> p_up;
    std::vector<double> p_down;
    std::vector<double> sz;
    std::vector<double> z_com;
    std::vector<std::vector<double>> site_up;    // [time][site]
    std::vector<std::vector<double>> site_down;  // [time][site]
    std::vector<Helicity> eta;
};

struct Observables {
    double trace = 0.0, p_up = 0.0, p_down = 0.0, sz = 0.0, z_com = 0.0;
    std::vector<double> site_up, site_down;
};

Observables measure(const ExcitationState& state, std::span<const double> site_z);
Observables measure(const CMat& rho, std::span<const double> site_z);

// Runs the propagator over `times` and collects observables; eta is filled
// with the default dead-band.
ObservableSeries evolve(const ExcitationState& state, const Propagator& prop, std::span<const double> site_z,
                        const std::vector<double>& times);
ObservableSeries evolve_serial(const ExcitationState& state, const Propagator& prop,
                               std::span<const double> site_z, const std::vector<double>& times);

inline constexpr double kHelicityDeadBand = 1e-6;

// eta = sign(<S_z> v) with v = d<z>/dt from a central difference over
// +-window samples; Undefined inside the dead-band.
std::vector<Helicity> helicity(const ObservableSeries& series, double dead_band = kHelicityDeadBand,
                               int window = 1);

std::vector<double> uniform_times(double t_max, int points);

// First local maximum of the population on `site` (arrival diagnostic); -1 if none.
double arrival_time(const ObservableSeries& series, std::size_t site);

struct MasterEquationReport {
    double deviation = 0.0;   // max |observable difference| over samples
    double norm_drift = 0.0;  // max |Tr rho - Tr rho(0)| from the direct integration
};

/// Integrates d rho/dt = -i (H rho - rho H^dag) directly with an adaptive
/// Dormand-Prince stepper and compares all observables with branch
/// propagation at `samples` evenly spaced times in (0, t]. Requires N <= 8.
MasterEquationReport master_equation_check(const ExcitationState& state, const CouplingTensor& coupling,
                                           bool hermitian_only, double t, std::span<const double> site_z,
                                           int samples = 10);

}  // namespace chiral

#endif
