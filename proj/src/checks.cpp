#include "chiral/checks.hpp"

#include "chiral/bloch.hpp"
#include "chiral/dynamics.hpp"
#include "chiral/greens.hpp"
#include "chiral/hamiltonian.hpp"
#include "chiral/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace chiral {

namespace {

CheckResult below(std::string name, double value, double tol, std::string detail = {}) {
    return {std::move(name), value <= tol, value, tol, std::move(detail)};
}

double spectrum_distance(CVec a, CVec b) {
    auto key = [](const cplx& x, const cplx& y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    };
    std::sort(a.data(), a.data() + a.size(), key);
    std::sort(b.data(), b.data() + b.size(), key);
    return (a - b).cwiseAbs().maxCoeff();
}

// Greedy pairing of modes at k with modes at -k under (e, G, Sz) -> (e, G, -Sz).
double pair_mismatch(const std::vector<BlochMode>& a, const std::vector<BlochMode>& b) {
    std::vector<char> used(b.size(), 0);
    double worst = 0.0;
    for (const auto& m : a) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t pick = 0;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            const double d = std::max({std::abs(m.energy - b[j].energy), std::abs(m.gamma - b[j].gamma),
                                       std::abs(m.sz + b[j].sz)});
            if (d < best) {
                best = d;
                pick = j;
            }
        }
        used[pick] = 1;
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(const EmitterGeometry& geom, const CheckOptions& options) {
    std::vector<CheckResult> out;
    const auto n = static_cast<Eigen::Index>(geom.size());

    {
        const CVec3 u = PolarizationBasis::up(), d = PolarizationBasis::down();
        const double dev = std::max({std::abs(u.dot(u) - 1.0), std::abs(d.dot(d) - 1.0), std::abs(u.dot(d))});
        out.push_back(below("polarization basis orthonormal", dev, 1e-15));
    }
    {
        const PairCoupling c = coupling_from_tensor(green_tensor(Vec3(0.0, 0.0, 1e-4)));
        const double dev = std::max(std::abs(c.dissipative(0, 0) - kGamma0), std::abs(c.dissipative(1, 1) - kGamma0));
        out.push_back(below("self-decay limit reproduces Gamma0", dev, 1e-6));
    }
    {
        double dev = 0.0;
        for (double dz : {0.05, 0.3, 1.7, 12.0}) {
            const PairCoupling c = pair_coupling(Vec3::Zero(), Vec3(0.0, 0.0, dz));
            dev = std::max({dev, std::abs(c.coherent(0, 1)), std::abs(c.dissipative(0, 1))});
        }
        out.push_back(below("axial pairs decouple spins", dev, 1e-12));
    }
    {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> coord(-1.0, 1.0), angle(-kPi, kPi);
        double dev = 0.0;
        for (int s = 0; s < 100; ++s) {
            const Vec3 a(coord(rng), coord(rng), coord(rng)), b(coord(rng), coord(rng), coord(rng));
            const double delta = angle(rng);
            const Eigen::Matrix3d rot = Eigen::AngleAxisd(delta, Vec3::UnitZ()).toRotationMatrix();
            const PairCoupling c0 = pair_coupling(a, b), c1 = pair_coupling(rot * a, rot * b);
            const cplx phase = std::polar(1.0, -2.0 * delta);
            dev = std::max({dev, std::abs(c1.coherent(0, 1) - phase * c0.coherent(0, 1)),
                            std::abs(c1.coherent(0, 0) - c0.coherent(0, 0)),
                            std::abs(c1.dissipative(0, 1) - phase * c0.dissipative(0, 1))});
        }
        out.push_back(below("azimuthal phase covariance", dev, 1e-10));
    }

    const CouplingTensor coupling = assemble(geom);
    {
        const double herm = std::max((coupling.coherent - coupling.coherent.adjoint()).cwiseAbs().maxCoeff(),
                                     (coupling.dissipative - coupling.dissipative.adjoint()).cwiseAbs().maxCoeff());
        out.push_back(below("coupling matrices Hermitian", herm, 1e-12));
        const double scale = coupling.dissipative.cwiseAbs().maxCoeff();
        out.push_back(below("decay matrix positive semidefinite", std::max(0.0, -min_decay_eigenvalue(coupling)),
                            1e-10 * std::max(1.0, scale * static_cast<double>(2 * n))));
    }
    const EffectiveHamiltonian heff = effective(coupling, options.hermitian_only);
    const Propagator prop(heff);
    {
        const double trace_dev = std::abs(prop.eigenvalues().imag().sum() -
                                          (options.hermitian_only ? 0.0 : -static_cast<double>(n) * kGamma0));
        out.push_back(below("trace identity of H_eff", trace_dev, 1e-8));
    }
    const auto z = geom.z_coordinates();
    const auto times = uniform_times(20.0, 201);
    {
        const auto series = evolve(initial_state(n, 0, 0.5), prop, z, times);
        double rise = 0.0, split = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            split = std::max(split, std::abs(series.p_up[i] + series.p_down[i] - series.trace[i]));
            if (i > 0) rise = std::max(rise, series.trace[i] - series.trace[i - 1]);
        }
        out.push_back(below("P_up + P_down = trace", split, 1e-10));
        if (options.hermitian_only) {
            double drift = 0.0;
            for (double t : series.trace) drift = std::max(drift, std::abs(t - 1.0));
            out.push_back(below("Hermitian evolution conserves norm", drift, 1e-8));
        } else {
            out.push_back(below("norm non-increasing", std::max(0.0, rise), 1e-10));
        }
    }
    {
        HelixParams small{0.05, 0.175, 3, 2, Handedness::Left};
        const EmitterGeometry g6 = build_helix(small);
        const auto rep = master_equation_check(initial_state(6, 0, 0.5), assemble(g6), options.hermitian_only, 5.0,
                                               g6.z_coordinates());
        out.push_back(below("no-jump master equation agrees with branch propagation", rep.deviation, 1e-6));
    }

    if (!geom.source) return out;
    const HelixParams params = *geom.source;
    {
        const EmitterGeometry mirrored = mirror_z_plane(geom);
        const Propagator mprop(effective(assemble(mirrored), options.hermitian_only));
        out.push_back(below("mirror helices share the H_eff spectrum",
                            spectrum_distance(prop.eigenvalues(), mprop.eigenvalues()), 1e-10));
        const auto a = evolve(initial_state(n, 0, 0.5), prop, z, times);
        const auto b = evolve(initial_state(n, 0, 0.5), mprop, z, times);
        double dev = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i)
            dev = std::max({dev, std::abs(a.p_up[i] - b.p_down[i]), std::abs(a.p_down[i] - b.p_up[i])});
        out.push_back(below("mirror swaps spin populations", dev, 1e-10));
    }
    {
        const auto grid = brillouin_grid(params.pitch, options.band_points);
        const BandStructure bs = band_structure(params, grid, options.band_cutoff, options.hermitian_only);
        double dev = 0.0, fixed = 0.0;
        const std::size_t nk = grid.size();
        for (std::size_t i = 0; i < nk; ++i) {
            dev = std::max(dev, pair_mismatch(bs.modes[i], bs.modes[nk - 1 - i]));
            if (is_anti_inversion_invariant(grid[i], params.pitch))
                for (const auto& m : bs.modes[i]) fixed = std::max(fixed, std::abs(m.sz));
        }
        out.push_back(below("band structure even in energy/decay, odd in spin", dev, 1e-6));
        out.push_back(below("spin vanishes at k = 0, +-pi/a", fixed, 1e-6));
    }
    {
        ZakOptions zo;
        zo.n_k = options.zak_points;
        zo.cutoff_cells = options.band_cutoff;
        const ZakResult all = zak_phase(params, BandGroup::All, zo);
        out.push_back(below("all-band Wilson loop is trivial", std::abs(all.phase), 1e-8));
        for (BandGroup g : {BandGroup::Lower, BandGroup::Upper}) {
            const ZakResult r = zak_phase(params, g, zo);
            CheckResult c = below(std::string("Zak phase quantized (") + to_string(g) + ")",
                                  std::isfinite(r.residual) ? r.residual : 1.0, 1e-2, "phase " + std::to_string(r.phase));
            out.push_back(std::move(c));
        }
    }
    return out;
}

}  // namespace chiral
