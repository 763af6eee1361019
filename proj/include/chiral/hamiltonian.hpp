#ifndef CHIRAL_HAMILTONIAN_HPP
#define CHIRAL_HAMILTONIAN_HPP

#include "chiral/geometry.hpp"
#include "chiral/types.hpp"

#include <iosfwd>

namespace chiral {

/// Coherent (J) and dissipative (Gamma) 2N x 2N matrices in the site-major
/// basis (index = 2*site + spin, up = 0, down = 1). J has a zero diagonal
/// (rotating frame, Lamb shift dropped); Gamma has Gamma0 on its diagonal.
struct CouplingTensor {
    CMat coherent;
    CMat dissipative;

    Eigen::Index sites() const { return coherent.rows() / 2; }
};

CouplingTensor assemble(const EmitterGeometry& geom);
// Single-threaded reference for assemble(); results are bit-identical.
CouplingTensor assemble_serial(const EmitterGeometry& geom);

struct EffectiveHamiltonian {
    CMat matrix;
    bool hermitian_only = false;
};

// J - i Gamma / 2, or J alone when hermitian_only.
EffectiveHamiltonian effective(const CouplingTensor& coupling, bool hermitian_only);

// Smallest eigenvalue of the (Hermitian) decay matrix.
double min_decay_eigenvalue(const CouplingTensor& coupling);

// Rows "row,col,re,im" for every entry.
void write_matrix_csv(std::ostream& out, const CMat& m);

}  // namespace chiral

#endif
