#include "chiral/greens.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace chiral;

namespace {

// Power series of x * A(x) and x * B(x) where
// Im G = k0 / (4 pi x) [x A(x) 1 - x B(x) n n]; free of the 1/x^2 cancellation.
void im_series(double x, double& fa, double& fb) {
    fa = fb = 0.0;
    double sign = 1.0, xp = x, f1 = 1.0;
    for (int m = 0; m < 40; ++m) {
        const double f2 = f1 * (2 * m + 2), f3 = f2 * (2 * m + 3);
        fa += sign * xp * (1.0 / f1 - 1.0 / f2 + 1.0 / f3);
        fb += sign * xp * (1.0 / f1 - 3.0 / f2 + 3.0 / f3);
        sign = -sign;
        xp *= x * x;
        f1 = f3;
    }
}

}  // namespace

TEST_CASE("circular basis is orthonormal") {
    const CVec3 u = PolarizationBasis::up(), d = PolarizationBasis::down();
    CHECK(std::abs(u.dot(u) - 1.0) < 1e-15);
    CHECK(std::abs(d.dot(d) - 1.0) < 1e-15);
    CHECK(std::abs(u.dot(d)) < 1e-15);
    CHECK(PolarizationBasis::vector(Spin::Down) == d);
}

TEST_CASE("imaginary part matches the power-series oracle in every direction") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> nd;
    const double k0 = kWavenumber;
    for (double x : {1e-8, 1e-3, 0.1, 0.9, 2.0, 3.5}) {
        for (int s = 0; s < 5; ++s) {
            const Vec3 n = Vec3(nd(rng), nd(rng), nd(rng)).normalized();
            const Tensor3 g = green_tensor((x / k0) * n);
            double fa, fb;
            im_series(x, fa, fb);
            Eigen::Matrix3d oracle = -fb * n * n.transpose();
            oracle.diagonal().array() += fa;
            oracle *= k0 / (4.0 * kPi * x);
            CHECK((g.imag() - oracle).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("real part follows the closed form and the far-field limit") {
    const double k0 = kWavenumber;
    const Vec3 n = Vec3(0.3, -0.4, 0.5).normalized();
    const double r = 0.37, x = k0 * r;
    const Tensor3 g = green_tensor(r * n);
    const double pref = 1.0 / (4.0 * kPi * r);
    const double a = std::cos(x) * (1.0 - 1.0 / (x * x)) - std::sin(x) / x;
    const double b = -(std::cos(x) * (1.0 - 3.0 / (x * x)) - 3.0 * std::sin(x) / x);
    Eigen::Matrix3d oracle = b * pref * n * n.transpose();
    oracle.diagonal().array() += a * pref;
    CHECK((g.real() - oracle).cwiseAbs().maxCoeff() < 1e-13);

    // Deep in the far zone the tensor is transverse: G n -> O(1/x^2).
    const Tensor3 far = green_tensor(1e4 * n);
    CHECK((far * n.cast<cplx>()).norm() * 4.0 * kPi * 1e4 < 1e-3);
}

TEST_CASE("green tensor is symmetric and reciprocal") {
    const Vec3 r(0.11, -0.07, 0.2);
    const Tensor3 g = green_tensor(r);
    CHECK((g - g.transpose()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((g - green_tensor(-r)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK_THROWS_AS(green_tensor(Vec3::Zero()), ValidationError);
}

TEST_CASE("pair couplings") {
    SUBCASE("self-decay limit gives Gamma0 and no coherent self-shift in the imaginary part") {
        const PairCoupling c = pair_coupling(Vec3::Zero(), Vec3(1e-9, 0, 0));
        CHECK(std::abs(c.dissipative(0, 0) - 1.0) < 1e-12);
        CHECK(std::abs(c.dissipative(1, 1) - 1.0) < 1e-12);
    }
    SUBCASE("blocks are Hermitian under i <-> j") {
        const Vec3 a(0.05, 0.0, 0.0), b(-0.025, 0.043, 0.058);
        const PairCoupling ab = pair_coupling(a, b), ba = pair_coupling(b, a);
        CHECK((ab.coherent - ba.coherent.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
        CHECK((ab.dissipative - ba.dissipative.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
        CHECK((ab.effective() - (ab.coherent - 0.5 * I * ab.dissipative)).norm() == 0.0);
    }
    SUBCASE("axial separations conserve spin") {
        const PairCoupling c = pair_coupling(Vec3(0.1, 0.2, 0.0), Vec3(0.1, 0.2, 0.3));
        CHECK(std::abs(c.coherent(0, 1)) < 1e-15);
        CHECK(std::abs(c.dissipative(1, 0)) < 1e-15);
        CHECK(std::abs(c.coherent(0, 0) - c.coherent(1, 1)) < 1e-15);
    }
    SUBCASE("rotation about z multiplies the spin-flip term by exp(-2 i delta)") {
        const Vec3 a(0.1, 0.0, 0.0), b(0.0, 0.2, 0.1);
        const double d = 0.83;
        const Eigen::Matrix3d rot = Eigen::AngleAxisd(d, Vec3::UnitZ()).toRotationMatrix();
        const PairCoupling c0 = pair_coupling(a, b), c1 = pair_coupling(rot * a, rot * b);
        CHECK(std::abs(c1.coherent(0, 1) - std::exp(cplx(0, -2 * d)) * c0.coherent(0, 1)) < 1e-14);
        CHECK(std::abs(c1.coherent(1, 0) - std::exp(cplx(0, 2 * d)) * c0.coherent(1, 0)) < 1e-14);
        CHECK(std::abs(c1.coherent(0, 0) - c0.coherent(0, 0)) < 1e-14);
    }
}
