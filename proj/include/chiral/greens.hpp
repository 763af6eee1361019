#ifndef CHIRAL_GREENS_HPP
#define CHIRAL_GREENS_HPP

#include "chiral/types.hpp"

namespace chiral {

using Tensor3 = Eigen::Matrix3cd;

/// Circular polarization vectors (x + i y)/sqrt(2) and (x - i y)/sqrt(2).
struct PolarizationBasis {
    static CVec3 up();
    static CVec3 down();
    static CVec3 vector(Spin s) { return s == Spin::Up ? up() : down(); }
};

// Free-space dyadic Green's tensor at separation r (|r| > 0), normalized so
// that Im G_aa -> k0 / (6 pi) as r -> 0.
Tensor3 green_tensor(const Vec3& r, double k0 = kWavenumber);

/// 2x2 spin blocks of the coherent (J) and dissipative (Gamma) couplings
/// between emitters i and j, indexed [sigma_i][sigma_j], in units of Gamma0.
struct PairCoupling {
    Eigen::Matrix2cd coherent;
    Eigen::Matrix2cd dissipative;

    // J - i Gamma / 2
    Eigen::Matrix2cd effective() const { return coherent - 0.5 * I * dissipative; }
};

// Contracts the real and imaginary parts of G separately with the circular
// basis: J = -(3/2) eps^dag Re(G) eps', Gamma = 3 eps^dag Im(G) eps'.
PairCoupling pair_coupling(const Vec3& ri, const Vec3& rj);
PairCoupling coupling_from_tensor(const Tensor3& g);

}  // namespace chiral

#endif
