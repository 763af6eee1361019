#include "chiral/bloch.hpp"

#include "chiral/greens.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace chiral {

namespace {

Vec3 sublattice_position(const HelixParams& p, int mu) {
    const double phi = 2.0 * kPi * mu / p.sites_per_turn;
    const double sign = -static_cast<double>(xi(p.handedness));
    return {p.radius * std::cos(phi), sign * p.radius * std::sin(phi), mu * p.spacing()};
}

void fix_phase(Eigen::Ref<CVec> v) {
    v.normalize();
    const double max_abs = v.cwiseAbs().maxCoeff();
    Eigen::Index pivot = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) >= max_abs * (1.0 - 1e-9)) {
            pivot = i;
            break;
        }
    }
    if (std::abs(v(pivot)) > 0.0) v *= std::conj(v(pivot)) / std::abs(v(pivot));
}

}  // namespace

LatticeCouplings::LatticeCouplings(const HelixParams& params, int cutoff_cells, bool hermitian_only)
    : params_(params), cutoff_(cutoff_cells), hermitian_only_(hermitian_only) {
    params_.validate();
    if (cutoff_cells < 1) throw ValidationError("lattice cutoff must be at least one cell");
    const int n = params_.sites_per_turn;
    const long max_offset = static_cast<long>(cutoff_) * n;
    const int cells = 2 * cutoff_ + 3;  // m in [-M-1, M+1]
    const int pairs = n * n;

    std::vector<std::vector<Term>> slots(static_cast<std::size_t>(pairs),
                                         std::vector<Term>(static_cast<std::size_t>(cells)));
    std::vector<std::vector<char>> keep(static_cast<std::size_t>(pairs),
                                        std::vector<char>(static_cast<std::size_t>(cells), 0));
    const long total = static_cast<long>(pairs) * cells;
#pragma omp parallel for schedule(static)
    for (long idx = 0; idx < total; ++idx) {
        const int p = static_cast<int>(idx / cells);
        const int c = static_cast<int>(idx % cells);
        const int mu = p / n;
        const int nu = p % n;
        const int m = c - cutoff_ - 1;
        const long offset = static_cast<long>(nu - mu) + static_cast<long>(m) * n;
        if (std::labs(offset) > max_offset) continue;
        Eigen::Matrix2cd block;
        if (offset == 0) {
            block = hermitian_only_ ? Eigen::Matrix2cd::Zero() : Eigen::Matrix2cd(-0.5 * I * kGamma0 *
                                                                                 Eigen::Matrix2cd::Identity());
        } else {
            const Vec3 ri = sublattice_position(params_, mu);
            const Vec3 rj = sublattice_position(params_, nu) + Vec3(0.0, 0.0, m * params_.pitch);
            const PairCoupling pc = pair_coupling(ri, rj);
            block = hermitian_only_ ? pc.coherent : pc.effective();
        }
        slots[p][c] = Term{m, offset, block};
        keep[p][c] = 1;
    }
    terms_.resize(static_cast<std::size_t>(pairs));
    for (int p = 0; p < pairs; ++p) {
        for (int c = 0; c < cells; ++c)
            if (keep[p][c]) terms_[p].push_back(slots[p][c]);
    }
}

CMat LatticeCouplings::sum(double k, long max_offset) const {
    const int n = params_.sites_per_turn;
    const int cells = 2 * cutoff_ + 3;
    std::vector<cplx> phase(static_cast<std::size_t>(cells));
    for (int c = 0; c < cells; ++c) phase[c] = std::polar(1.0, k * params_.pitch * (c - cutoff_ - 1));
    CMat h = CMat::Zero(2 * n, 2 * n);
    for (int mu = 0; mu < n; ++mu) {
        for (int nu = 0; nu < n; ++nu) {
            Eigen::Matrix2cd acc = Eigen::Matrix2cd::Zero();
            for (const Term& t : terms_[mu * n + nu]) {
                if (std::labs(t.offset) > max_offset) continue;
                acc += phase[t.cell + cutoff_ + 1] * t.block;
            }
            h.block<2, 2>(2 * mu, 2 * nu) = acc;
        }
    }
    return h;
}

CMat LatticeCouplings::matrix(double k) const {
    return sum(k, static_cast<long>(cutoff_) * params_.sites_per_turn);
}

CMat LatticeCouplings::half_cutoff_matrix(double k) const {
    return sum(k, static_cast<long>(cutoff_ / 2) * params_.sites_per_turn);
}

double LatticeCouplings::convergence(double k) const {
    return (matrix(k) - half_cutoff_matrix(k)).cwiseAbs().maxCoeff();
}

BlochHamiltonian bloch_hamiltonian(const HelixParams& params, double k, int cutoff_cells, bool hermitian_only) {
    const LatticeCouplings lattice(params, cutoff_cells, hermitian_only);
    CMat h = lattice.matrix(k);
    const double conv = (h - lattice.half_cutoff_matrix(k)).cwiseAbs().maxCoeff();
    return {k, std::move(h), cutoff_cells, conv};
}

CMat anti_inversion(const HelixParams& params, double k) {
    const int n = params.sites_per_turn;
    CMat u = CMat::Zero(2 * n, 2 * n);
    for (int mu = 0; mu < n; ++mu) {
        const int image = (n - mu) % n;
        const int shift = mu == 0 ? 0 : -1;
        const cplx phase = std::polar(1.0, k * shift * params.pitch);
        u(basis_index(image, Spin::Down), basis_index(mu, Spin::Up)) = phase;
        u(basis_index(image, Spin::Up), basis_index(mu, Spin::Down)) = phase;
    }
    return u;
}

bool is_anti_inversion_invariant(double k, double pitch) {
    const double edge = kPi / pitch;
    const double tol = 1e-12 * edge;
    return std::abs(k) <= tol || std::abs(std::abs(k) - edge) <= tol;
}

CMat spin_z_operator(int sites_per_turn) {
    CMat sz = CMat::Zero(2 * sites_per_turn, 2 * sites_per_turn);
    for (int mu = 0; mu < sites_per_turn; ++mu) {
        sz(basis_index(mu, Spin::Up), basis_index(mu, Spin::Up)) = 1.0;
        sz(basis_index(mu, Spin::Down), basis_index(mu, Spin::Down)) = -1.0;
    }
    return sz;
}

Eigenframe diagonalize(const CMat& h, bool hermitian, const CMat& resolver) {
    const Eigen::Index dim = h.rows();
    CVec values(dim);
    CMat vectors(dim, dim);
    if (hermitian) {
        Eigen::SelfAdjointEigenSolver<CMat> es(h);
        if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver failed");
        values = es.eigenvalues().cast<cplx>();
        vectors = es.eigenvectors();
    } else {
        Eigen::ComplexEigenSolver<CMat> es(h, true);
        if (es.info() != Eigen::Success) throw NumericalError("complex eigensolver failed");
        std::vector<Eigen::Index> order(static_cast<std::size_t>(dim));
        std::iota(order.begin(), order.end(), 0);
        const CVec& ev = es.eigenvalues();
        std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
            if (ev(a).real() != ev(b).real()) return ev(a).real() < ev(b).real();
            return ev(a).imag() < ev(b).imag();
        });
        for (Eigen::Index i = 0; i < dim; ++i) {
            values(i) = ev(order[i]);
            vectors.col(i) = es.eigenvectors().col(order[i]);
        }
    }

    const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
    const double tol = 1e-9 * scale;
    Eigen::Index start = 0;
    while (start < dim) {
        Eigen::Index end = start + 1;
        while (end < dim && std::abs(values(end) - values(end - 1)) <= tol) ++end;
        const Eigen::Index size = end - start;
        if (size > 1) {
            Eigen::HouseholderQR<CMat> qr(vectors.middleCols(start, size));
            const CMat q = qr.householderQ() * CMat::Identity(dim, size);
            CMat restricted = q.adjoint() * resolver * q;
            restricted = 0.5 * (restricted + restricted.adjoint()).eval();
            Eigen::SelfAdjointEigenSolver<CMat> es(restricted);
            vectors.middleCols(start, size) = q * es.eigenvectors();
        }
        start = end;
    }
    for (Eigen::Index i = 0; i < dim; ++i) fix_phase(vectors.col(i));
    return {values, vectors};
}

int BandStructure::ambiguous_steps() const {
    int count = 0;
    for (const auto& row : modes)
        if (!row.empty() && row.front().ambiguous) ++count;
    return count;
}

double BandStructure::max_convergence() const {
    return convergence.empty() ? 0.0 : *std::max_element(convergence.begin(), convergence.end());
}

std::vector<double> brillouin_grid(double pitch, int points) {
    if (points < 2) throw ValidationError("Brillouin-zone grid needs at least two points");
    if (!(pitch > 0.0)) throw ValidationError("pitch must be positive");
    const double edge = kPi / pitch;
    std::vector<double> k(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) k[i] = edge * static_cast<double>(2 * i - (points - 1)) / (points - 1);
    return k;
}

namespace {

std::vector<BlochMode> modes_at(const LatticeCouplings& lattice, double k, const CMat& sz, double& conv) {
    const CMat h = lattice.matrix(k);
    conv = (h - lattice.half_cutoff_matrix(k)).cwiseAbs().maxCoeff();
    const CMat resolver =
        is_anti_inversion_invariant(k, lattice.params().pitch) ? anti_inversion(lattice.params(), k) : sz;
    const Eigenframe frame = diagonalize(h, lattice.hermitian_only(), resolver);
    std::vector<BlochMode> modes(static_cast<std::size_t>(h.rows()));
    for (Eigen::Index n = 0; n < h.rows(); ++n) {
        BlochMode& m = modes[n];
        m.eigenvalue = frame.values(n);
        m.energy = m.eigenvalue.real();
        m.gamma = -2.0 * m.eigenvalue.imag();
        m.vector = frame.vectors.col(n);
        m.sz = (m.vector.adjoint() * sz * m.vector)(0, 0).real() / m.vector.squaredNorm();
        m.in_light_cone = std::abs(k) < kWavenumber;
    }
    return modes;
}

// Orders the modes at each k by maximal overlap with the previous k.
void continue_bands(BandStructure& bs) {
    const std::size_t nb = static_cast<std::size_t>(bs.bands());
    for (std::size_t i = 1; i < bs.modes.size(); ++i) {
        const auto& prev = bs.modes[i - 1];
        auto& cur = bs.modes[i];
        std::vector<std::tuple<double, std::size_t, std::size_t>> overlaps;
        overlaps.reserve(nb * nb);
        for (std::size_t a = 0; a < nb; ++a)
            for (std::size_t b = 0; b < nb; ++b)
                overlaps.emplace_back(std::norm(prev[a].vector.dot(cur[b].vector)), a, b);
        std::stable_sort(overlaps.begin(), overlaps.end(),
                         [](const auto& x, const auto& y) { return std::get<0>(x) > std::get<0>(y); });
        std::vector<long> assign(nb, -1);
        std::vector<char> taken(nb, 0);
        bool ambiguous = false;
        for (const auto& [w, a, b] : overlaps) {
            if (assign[a] >= 0 || taken[b]) continue;
            assign[a] = static_cast<long>(b);
            taken[b] = 1;
            if (w < 0.5) ambiguous = true;
        }
        if (ambiguous) {
            // Modes are stored energy-sorted, so keeping the input order is the energy fallback.
            for (auto& m : cur) m.ambiguous = true;
            continue;
        }
        std::vector<BlochMode> ordered(nb);
        for (std::size_t a = 0; a < nb; ++a) ordered[a] = std::move(cur[static_cast<std::size_t>(assign[a])]);
        cur = std::move(ordered);
    }
}

void fill_velocities(BandStructure& bs) {
    const std::size_t nk = bs.k.size();
    if (nk < 2) return;
    for (std::size_t i = 0; i < nk; ++i) {
        const std::size_t lo = i == 0 ? 0 : i - 1;
        const std::size_t hi = i + 1 == nk ? nk - 1 : i + 1;
        const double dk = bs.k[hi] - bs.k[lo];
        for (int n = 0; n < bs.bands(); ++n)
            bs.modes[i][n].velocity = (bs.modes[hi][n].energy - bs.modes[lo][n].energy) / dk;
    }
}

BandStructure prepare(const LatticeCouplings& lattice, const std::vector<double>& k_grid) {
    if (!std::is_sorted(k_grid.begin(), k_grid.end())) throw ValidationError("k grid must be sorted");
    const double edge = kPi / lattice.params().pitch;
    for (double k : k_grid)
        if (std::abs(k) > edge * (1.0 + 1e-12)) throw ValidationError("k grid leaves the Brillouin zone");
    BandStructure bs;
    bs.params = lattice.params();
    bs.cutoff_cells = lattice.cutoff_cells();
    bs.hermitian_only = lattice.hermitian_only();
    bs.k = k_grid;
    bs.modes.resize(k_grid.size());
    bs.convergence.resize(k_grid.size());
    return bs;
}

}  // namespace

BandStructure band_structure(const LatticeCouplings& lattice, const std::vector<double>& k_grid) {
    BandStructure bs = prepare(lattice, k_grid);
    const CMat sz = spin_z_operator(lattice.params().sites_per_turn);
    const auto nk = static_cast<long>(k_grid.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < nk; ++i) bs.modes[i] = modes_at(lattice, k_grid[i], sz, bs.convergence[i]);
    continue_bands(bs);
    fill_velocities(bs);
    return bs;
}

BandStructure band_structure_serial(const LatticeCouplings& lattice, const std::vector<double>& k_grid) {
    BandStructure bs = prepare(lattice, k_grid);
    const CMat sz = spin_z_operator(lattice.params().sites_per_turn);
    for (std::size_t i = 0; i < k_grid.size(); ++i) bs.modes[i] = modes_at(lattice, k_grid[i], sz, bs.convergence[i]);
    continue_bands(bs);
    fill_velocities(bs);
    return bs;
}

BandStructure band_structure(const HelixParams& params, const std::vector<double>& k_grid, int cutoff_cells,
                             bool hermitian_only) {
    const LatticeCouplings lattice(params, cutoff_cells, hermitian_only);
    return band_structure(lattice, k_grid);
}

}  // namespace chiral
