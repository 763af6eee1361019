#include "chiral/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chiral {

GapDescriptor detect_gap(const std::vector<std::vector<double>>& energies, double threshold) {
    GapDescriptor gap;
    if (energies.empty() || energies.front().size() < 2) return gap;
    const std::size_t nb = energies.front().size();
    std::vector<double> lo(nb, std::numeric_limits<double>::infinity());
    std::vector<double> hi(nb, -std::numeric_limits<double>::infinity());
    for (auto row : energies) {
        std::sort(row.begin(), row.end());
        for (std::size_t n = 0; n < nb; ++n) {
            lo[n] = std::min(lo[n], row[n]);
            hi[n] = std::max(hi[n], row[n]);
        }
    }
    for (std::size_t n = 0; n + 1 < nb; ++n) {
        const double width = lo[n + 1] - hi[n];
        if (width > threshold && width > gap.width) {
            gap.lower_edge = hi[n];
            gap.upper_edge = lo[n + 1];
            gap.width = width;
            gap.bands_below = static_cast<int>(n + 1);
        }
    }
    return gap;
}

GapDescriptor detect_gap(const BandStructure& bands, double threshold) {
    std::vector<std::vector<double>> energies;
    energies.reserve(bands.modes.size());
    for (const auto& row : bands.modes) {
        std::vector<double> e;
        for (const auto& m : row) e.push_back(m.energy);
        energies.push_back(std::move(e));
    }
    return detect_gap(energies, threshold);
}

WilsonLoop wilson_loop(const std::vector<CMat>& left, const std::vector<CMat>& right) {
    if (left.size() != right.size() || left.empty()) throw ValidationError("Wilson loop needs matching frames");
    const std::size_t n = right.size();
    const Eigen::Index d = right.front().cols();
    CMat product = CMat::Identity(d, d);
    WilsonLoop w;
    w.min_abs_det = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const CMat overlap = left[i] * right[(i + 1) % n];
        w.min_abs_det = std::min(w.min_abs_det, std::abs(overlap.determinant()));
        product = (product * overlap).eval();
    }
    w.phase = -std::arg(product.determinant());
    if (w.phase <= -kPi) w.phase += 2.0 * kPi;
    return w;
}

WilsonLoop wilson_loop(const std::vector<CMat>& frames) {
    std::vector<CMat> left;
    left.reserve(frames.size());
    for (const auto& f : frames) left.push_back(f.adjoint());
    return wilson_loop(left, frames);
}

const char* to_string(BandGroup g) {
    switch (g) {
        case BandGroup::Lower: return "lower";
        case BandGroup::Upper: return "upper";
        case BandGroup::All: return "all";
    }
    return "lower";
}

BandGroup band_group_from_string(const std::string& s) {
    if (s == "lower") return BandGroup::Lower;
    if (s == "upper") return BandGroup::Upper;
    if (s == "all") return BandGroup::All;
    throw ValidationError("unknown band group \"" + s + "\"");
}

double quantization_residual(double phase) {
    const double p = std::abs(std::remainder(phase, 2.0 * kPi));
    return std::min(p, kPi - p);
}

namespace {

struct Spectrum {
    CVec values;
    CMat right;
    CMat left;  // rows are dual vectors: left * right = 1
};

Spectrum solve(const CMat& h, bool hermitian) {
    Spectrum s;
    if (hermitian) {
        Eigen::SelfAdjointEigenSolver<CMat> es(h);
        if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver failed");
        s.values = es.eigenvalues().cast<cplx>();
        s.right = es.eigenvectors();
        s.left = s.right.adjoint();
        return s;
    }
    Eigen::ComplexEigenSolver<CMat> es(h, true);
    if (es.info() != Eigen::Success) throw NumericalError("complex eigensolver failed");
    const Eigen::Index dim = h.rows();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(dim));
    for (Eigen::Index i = 0; i < dim; ++i) order[i] = i;
    const CVec& ev = es.eigenvalues();
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return ev(a).real() < ev(b).real(); });
    s.values.resize(dim);
    s.right.resize(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        s.values(i) = ev(order[i]);
        s.right.col(i) = es.eigenvectors().col(order[i]);
    }
    s.left = s.right.partialPivLu().inverse();
    return s;
}

// k-independent involutions whose eigenspaces can split a gapless spectrum.
struct Sector {
    std::string name;
    CMat plus;   // isometry onto the +1 eigenspace
    CMat minus;  // isometry onto the -1 eigenspace
};

std::vector<Sector> candidate_sectors(int n) {
    std::vector<Sector> out;
    const double r = 1.0 / std::sqrt(2.0);
    Sector mirror{"mirror-sector", CMat::Zero(2 * n, n), CMat::Zero(2 * n, n)};
    Sector spin{"spin-sector", CMat::Zero(2 * n, n), CMat::Zero(2 * n, n)};
    for (int mu = 0; mu < n; ++mu) {
        mirror.plus(basis_index(mu, Spin::Up), mu) = r;
        mirror.plus(basis_index(mu, Spin::Down), mu) = r;
        mirror.minus(basis_index(mu, Spin::Up), mu) = r;
        mirror.minus(basis_index(mu, Spin::Down), mu) = -r;
        spin.plus(basis_index(mu, Spin::Up), mu) = 1.0;
        spin.minus(basis_index(mu, Spin::Down), mu) = 1.0;
    }
    out.push_back(std::move(mirror));
    out.push_back(std::move(spin));
    return out;
}

bool commutes(const Sector& s, const std::vector<CMat>& hs) {
    for (const auto& h : hs) {
        // An involution commutes with H iff H has no block between its eigenspaces.
        const double leak = (s.plus.adjoint() * h * s.minus).cwiseAbs().maxCoeff();
        if (leak > 1e-9 * std::max(1.0, h.cwiseAbs().maxCoeff())) return false;
    }
    return true;
}

}  // namespace

ZakResult zak_phase(const LatticeCouplings& lattice, BandGroup group, int n_k) {
    if (n_k < 50) throw ValidationError("Zak phase needs at least 50 k points");
    const HelixParams& p = lattice.params();
    const bool hermitian = lattice.hermitian_only();
    const int dim = lattice.dim();
    const double edge = kPi / p.pitch;

    std::vector<double> ks(static_cast<std::size_t>(n_k));
    for (int i = 0; i < n_k; ++i) ks[i] = -edge + 2.0 * edge * i / n_k;

    std::vector<CMat> hs(ks.size());
    std::vector<Spectrum> spectra(ks.size());
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n_k; ++i) {
        hs[i] = lattice.matrix(ks[i]);
        spectra[i] = solve(hs[i], hermitian);
    }

    std::vector<std::vector<double>> energies(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i)
        for (Eigen::Index n = 0; n < dim; ++n) energies[i].push_back(spectra[i].values(n).real());
    const GapDescriptor gap = detect_gap(energies);

    ZakResult result;
    result.sites_per_turn = p.sites_per_turn;
    result.group = group;
    result.n_k = n_k;
    result.gap_width = gap.width;

    std::vector<CMat> left(ks.size());
    std::vector<CMat> right(ks.size());
    if (group == BandGroup::All || gap.gapped()) {
        int first = 0;
        int count = dim;
        result.selection = "all";
        if (group != BandGroup::All) {
            result.selection = "gap";
            first = group == BandGroup::Lower ? 0 : gap.bands_below;
            count = group == BandGroup::Lower ? gap.bands_below : dim - gap.bands_below;
        }
        for (int n = first; n < first + count; ++n) result.bands.push_back(n);
        for (std::size_t i = 0; i < ks.size(); ++i) {
            right[i] = spectra[i].right.middleCols(first, count);
            left[i] = spectra[i].left.middleRows(first, count);
        }
    } else {
        const Sector* chosen = nullptr;
        const auto sectors = candidate_sectors(p.sites_per_turn);
        for (const auto& s : sectors) {
            if (commutes(s, hs)) {
                chosen = &s;
                break;
            }
        }
        if (chosen == nullptr) {
            result.selection = "none";
            result.well_defined = false;
            result.phase = std::numeric_limits<double>::quiet_NaN();
            result.residual = std::numeric_limits<double>::quiet_NaN();
            return result;
        }
        result.selection = chosen->name;
        std::vector<Spectrum> plus(ks.size()), minus(ks.size());
        double mean_plus = 0.0, mean_minus = 0.0;
        for (std::size_t i = 0; i < ks.size(); ++i) {
            plus[i] = solve(chosen->plus.adjoint() * hs[i] * chosen->plus, hermitian);
            minus[i] = solve(chosen->minus.adjoint() * hs[i] * chosen->minus, hermitian);
            mean_plus += plus[i].values.real().sum();
            mean_minus += minus[i].values.real().sum();
        }
        const bool plus_lower = mean_plus <= mean_minus;
        const bool take_plus = (group == BandGroup::Lower) == plus_lower;
        const CMat& iso = take_plus ? chosen->plus : chosen->minus;
        const auto& sec = take_plus ? plus : minus;
        for (std::size_t i = 0; i < ks.size(); ++i) {
            right[i] = iso * sec[i].right;
            left[i] = sec[i].left * iso.adjoint();
        }
    }

    const WilsonLoop w = wilson_loop(left, right);
    result.phase = w.phase;
    result.min_overlap = w.min_abs_det;
    result.residual = quantization_residual(w.phase);
    result.well_defined = w.min_abs_det >= 1e-6;
    return result;
}

ZakResult zak_phase(const HelixParams& params, BandGroup group, const ZakOptions& options) {
    const LatticeCouplings lattice(params, options.cutoff_cells, options.hermitian_only);
    return zak_phase(lattice, group, options.n_k);
}

}  // namespace chiral
