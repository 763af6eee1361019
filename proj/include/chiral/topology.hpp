#ifndef CHIRAL_TOPOLOGY_HPP
#define CHIRAL_TOPOLOGY_HPP

#include "chiral/bloch.hpp"

#include <string>
#include <vector>

namespace chiral {

struct GapDescriptor {
    double lower_edge = 0.0;
    double upper_edge = 0.0;
    double width = 0.0;   // 0 when no window exceeds the threshold
    int bands_below = 0;  // number of bands under the gap (0 when gapless)

    bool gapped() const { return width > 0.0; }
};

inline constexpr double kGapThreshold = 1e-3;

// Largest energy window free of every epsilon_nk that splits the bands into
// a lower and an upper group. energies[k] holds the band energies at one k.
GapDescriptor detect_gap(const std::vector<std::vector<double>>& energies, double threshold = kGapThreshold);
GapDescriptor detect_gap(const BandStructure& bands, double threshold = kGapThreshold);

struct WilsonLoop {
    double phase = 0.0;        // -arg det prod_i M_i, in (-pi, pi]
    double min_abs_det = 0.0;  // smallest |det M_i| along the loop
};

/// Discrete Wilson loop over a closed k path. left[i] (d x D) and right[i]
/// (D x d) are the dual and direct frames of the band group at k_i; for an
/// orthonormal frame left[i] = right[i]^dag. The path closes with the
/// identity boundary operator.
WilsonLoop wilson_loop(const std::vector<CMat>& left, const std::vector<CMat>& right);
WilsonLoop wilson_loop(const std::vector<CMat>& frames);

enum class BandGroup { Lower, Upper, All };

const char* to_string(BandGroup g);
BandGroup band_group_from_string(const std::string& s);

struct ZakOptions {
    int n_k = 400;
    int cutoff_cells = kDefaultCutoffCells;
    bool hermitian_only = true;  // false selects the biorthogonal variant on H_eff
};

struct ZakResult {
    int sites_per_turn = 0;
    BandGroup group = BandGroup::Lower;
    std::string selection;  // "gap", "mirror-sector", "spin-sector", "all" or "none"
    std::vector<int> bands; // energy-ordered band indices when selection == "gap"
    int n_k = 0;
    double phase = 0.0;     // in (-pi, pi]
    double residual = 0.0;  // distance to the nearer of {0, pi}
    double gap_width = 0.0;
    double min_overlap = 0.0;
    bool well_defined = false;
};

// Distance of a phase to the nearest of {0, pi} modulo 2 pi.
double quantization_residual(double phase);

ZakResult zak_phase(const HelixParams& params, BandGroup group, const ZakOptions& options = {});
ZakResult zak_phase(const LatticeCouplings& lattice, BandGroup group, int n_k);

}  // namespace chiral

#endif
