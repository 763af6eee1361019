#include "chiral/hamiltonian.hpp"

#include "chiral/greens.hpp"

#include <ostream>

namespace chiral {

namespace {

CouplingTensor allocate(const EmitterGeometry& geom) {
    if (geom.size() == 0) throw ValidationError("geometry has no emitters");
    check_distinct(geom.positions);
    const auto dim = static_cast<Eigen::Index>(2 * geom.size());
    CouplingTensor c{CMat::Zero(dim, dim), CMat::Zero(dim, dim)};
    c.dissipative.diagonal().setConstant(kGamma0);
    return c;
}

void fill_row(const EmitterGeometry& geom, Eigen::Index i, CouplingTensor& c) {
    const auto n = static_cast<Eigen::Index>(geom.size());
    for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        const PairCoupling pc = pair_coupling(geom.positions[i], geom.positions[j]);
        c.coherent.block<2, 2>(2 * i, 2 * j) = pc.coherent;
        c.dissipative.block<2, 2>(2 * i, 2 * j) = pc.dissipative;
    }
}

}  // namespace

CouplingTensor assemble(const EmitterGeometry& geom) {
    CouplingTensor c = allocate(geom);
    const auto n = static_cast<Eigen::Index>(geom.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (Eigen::Index i = 0; i < n; ++i) fill_row(geom, i, c);
    return c;
}

CouplingTensor assemble_serial(const EmitterGeometry& geom) {
    CouplingTensor c = allocate(geom);
    const auto n = static_cast<Eigen::Index>(geom.size());
    for (Eigen::Index i = 0; i < n; ++i) fill_row(geom, i, c);
    return c;
}

EffectiveHamiltonian effective(const CouplingTensor& coupling, bool hermitian_only) {
    if (hermitian_only) return {coupling.coherent, true};
    return {coupling.coherent - 0.5 * I * coupling.dissipative, false};
}

double min_decay_eigenvalue(const CouplingTensor& coupling) {
    Eigen::SelfAdjointEigenSolver<CMat> es(coupling.dissipative, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

void write_matrix_csv(std::ostream& out, const CMat& m) {
    out << "row,col,re,im\n";
    out.precision(17);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            out << r << ',' << c << ',' << m(r, c).real() << ',' << m(r, c).imag() << '\n';
}

}  // namespace chiral
