#ifndef CHIRAL_BLOCH_HPP
#define CHIRAL_BLOCH_HPP

#include "chiral/geometry.hpp"
#include "chiral/types.hpp"

#include <vector>

namespace chiral {

inline constexpr int kDefaultCutoffCells = 2000;

/// Real-space coupling blocks of the infinite helix, one unit cell per turn.
/// Pair (mu, nu, m) couples sublattice mu of cell 0 to sublattice nu of cell m
/// and is kept when |z_nu + m a - z_mu| <= cutoff * a. Truncating on the
/// pair separation keeps the summed set closed under z -> -z.
class LatticeCouplings {
public:
    LatticeCouplings(const HelixParams& params, int cutoff_cells, bool hermitian_only);

    // H(k)_{mu nu} = sum_m <0 mu|H|m nu> exp(i k m a).
    CMat matrix(double k) const;
    // Same sum restricted to half the cutoff.
    CMat half_cutoff_matrix(double k) const;
    // max |H_M(k) - H_{M/2}(k)|
    double convergence(double k) const;

    const HelixParams& params() const { return params_; }
    int cutoff_cells() const { return cutoff_; }
    bool hermitian_only() const { return hermitian_only_; }
    int dim() const { return 2 * params_.sites_per_turn; }

private:
    struct Term {
        int cell;
        long offset;  // separation along z in units of a / N
        Eigen::Matrix2cd block;
    };

    CMat sum(double k, long max_offset) const;

    HelixParams params_;
    int cutoff_;
    bool hermitian_only_;
    std::vector<std::vector<Term>> terms_;  // index mu * N + nu
};

struct BlochHamiltonian {
    double k = 0.0;
    CMat matrix;
    int cutoff_cells = 0;
    double convergence = 0.0;
};

BlochHamiltonian bloch_hamiltonian(const HelixParams& params, double k, int cutoff_cells, bool hermitian_only);

// Anti-inversion (C2 about x combined with spin flip) in the Bloch basis:
// H(-k) = U H(k) U^dag.
CMat anti_inversion(const HelixParams& params, double k);

// True at k = 0 and k = +-pi/a, where the anti-inversion maps k onto itself.
bool is_anti_inversion_invariant(double k, double pitch);

// S_z = 1_N (x) sigma_z in the sublattice (x) spin basis.
CMat spin_z_operator(int sites_per_turn);

/// Eigenvalues sorted by real part with unit-norm right eigenvectors; the
/// first component of largest modulus is made real and positive. Degenerate eigenspaces are
/// resolved by diagonalizing `resolver` within them.
struct Eigenframe {
    CVec values;
    CMat vectors;
};

Eigenframe diagonalize(const CMat& h, bool hermitian, const CMat& resolver);

struct BlochMode {
    cplx eigenvalue;
    double energy = 0.0;  // Re(lambda)
    double gamma = 0.0;   // -2 Im(lambda)
    double sz = 0.0;
    double velocity = 0.0;
    bool in_light_cone = false;
    bool ambiguous = false;  // continuation into this k fell back to energy order
    CVec vector;
};

struct BandStructure {
    HelixParams params;
    int cutoff_cells = 0;
    bool hermitian_only = false;
    std::vector<double> k;
    std::vector<std::vector<BlochMode>> modes;  // [k][band], bands continued across k
    std::vector<double> convergence;            // per k

    int bands() const { return modes.empty() ? 0 : static_cast<int>(modes.front().size()); }
    int ambiguous_steps() const;
    double max_convergence() const;
};

// `points` samples of [-pi/a, pi/a] placed symmetrically about k = 0.
std::vector<double> brillouin_grid(double pitch, int points);

BandStructure band_structure(const HelixParams& params, const std::vector<double>& k_grid, int cutoff_cells,
                             bool hermitian_only);
BandStructure band_structure(const LatticeCouplings& lattice, const std::vector<double>& k_grid);
// Single-threaded reference; identical output.
BandStructure band_structure_serial(const LatticeCouplings& lattice, const std::vector<double>& k_grid);

}  // namespace chiral

#endif
