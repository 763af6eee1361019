#include "chiral/greens.hpp"

#include <cmath>

namespace chiral {

CVec3 PolarizationBasis::up() { return CVec3(1.0, I, 0.0) / std::sqrt(2.0); }
CVec3 PolarizationBasis::down() { return CVec3(1.0, -I, 0.0) / std::sqrt(2.0); }

Tensor3 green_tensor(const Vec3& r, double k0) {
    const double dist = r.norm();
    if (!(dist > 0.0)) throw ValidationError("Green's tensor requested at zero separation");
    const Vec3 n = r / dist;
    const double x = k0 * dist;
    const cplx inv = 1.0 / x;
    const cplx a = 1.0 + I * inv - inv * inv;
    const cplx b = -(1.0 + 3.0 * I * inv - 3.0 * inv * inv);
    const cplx pref = std::exp(I * x) / (4.0 * kPi * dist);
    const Eigen::Matrix3d nn = n * n.transpose();
    Tensor3 g = (pref * b) * nn.cast<cplx>();
    g.diagonal().array() += pref * a;
    // The closed form cancels catastrophically in Im G for x << 1; the
    // spherical Bessel form k/(4 pi) [(2 j0 - j2)/3 + j2 n n] does not.
    if (x < 1.0) {
        const double j0 = std::sph_bessel(0, x), j2 = std::sph_bessel(2, x);
        Eigen::Matrix3d im = j2 * nn;
        im.diagonal().array() += (2.0 * j0 - j2) / 3.0;
        g.imag() = (k0 / (4.0 * kPi)) * im;
    }
    return g;
}

PairCoupling coupling_from_tensor(const Tensor3& g) {
    const Eigen::Matrix3cd re = g.real().cast<cplx>();
    const Eigen::Matrix3cd im = g.imag().cast<cplx>();
    const CVec3 eps[2] = {PolarizationBasis::up(), PolarizationBasis::down()};
    PairCoupling c;
    for (int s = 0; s < 2; ++s) {
        for (int t = 0; t < 2; ++t) {
            c.coherent(s, t) = -1.5 * kWavelength * kGamma0 * eps[s].dot(re * eps[t]);
            c.dissipative(s, t) = 3.0 * kWavelength * kGamma0 * eps[s].dot(im * eps[t]);
        }
    }
    return c;
}

PairCoupling pair_coupling(const Vec3& ri, const Vec3& rj) {
    const Vec3 d = ri - rj;
    if (!(d.norm() > 0.0)) throw ValidationError("pair coupling requested for coincident emitters");
    return coupling_from_tensor(green_tensor(d));
}

}  // namespace chiral
