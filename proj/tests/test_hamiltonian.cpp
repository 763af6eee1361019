#include "chiral/greens.hpp"
#include "chiral/hamiltonian.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <sstream>

using namespace chiral;

TEST_CASE("assembled couplings") {
    HelixParams p;
    p.turns = 4;
    const auto g = build_helix(p);
    const CouplingTensor c = assemble(g);
    REQUIRE(c.sites() == 12);
    REQUIRE(c.coherent.rows() == 24);

    SUBCASE("J and Gamma are Hermitian with unit decay and no self-shift") {
        CHECK((c.coherent - c.coherent.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
        CHECK((c.dissipative - c.dissipative.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
        for (Eigen::Index i = 0; i < 24; ++i) {
            CHECK(c.coherent(i, i) == cplx(0.0));
            CHECK(c.dissipative(i, i) == cplx(kGamma0));
        }
    }
    SUBCASE("Gamma is positive semidefinite and its trace counts emitters") {
        CHECK(min_decay_eigenvalue(c) > -1e-10);
        CHECK(std::abs(c.dissipative.trace() - 24.0) < 1e-12);
    }
    SUBCASE("blocks equal the pair couplings in site-major order") {
        const PairCoupling pc = pair_coupling(g.positions[2], g.positions[7]);
        for (int s = 0; s < 2; ++s)
            for (int t = 0; t < 2; ++t) {
                CHECK(c.coherent(basis_index(2, Spin(s)), basis_index(7, Spin(t))) == pc.coherent(s, t));
                CHECK(c.dissipative(basis_index(2, Spin(s)), basis_index(7, Spin(t))) == pc.dissipative(s, t));
            }
    }
    SUBCASE("effective Hamiltonian") {
        const EffectiveHamiltonian h = effective(c, false);
        CHECK((h.matrix - (c.coherent - 0.5 * I * c.dissipative)).norm() == 0.0);
        const EffectiveHamiltonian hh = effective(c, true);
        CHECK(hh.hermitian_only);
        CHECK(hh.matrix == c.coherent);
        // Every eigenvalue of J - i Gamma / 2 decays.
        Eigen::ComplexEigenSolver<CMat> es(h.matrix);
        CHECK(es.eigenvalues().imag().maxCoeff() < 1e-12);
    }
    SUBCASE("serial reference is identical") {
        const CouplingTensor s = assemble_serial(g);
        CHECK(s.coherent == c.coherent);
        CHECK(s.dissipative == c.dissipative);
    }
}

TEST_CASE("two axial emitters: eigenvalues are -i/2 +- the coupling") {
    const auto g = make_geometry({{0, 0, 0}, {0, 0, 0.3}}, "pair");
    const EffectiveHamiltonian h = effective(assemble(g), false);
    const cplx c = pair_coupling(g.positions[0], g.positions[1]).effective()(0, 0);
    Eigen::ComplexEigenSolver<CMat> es(h.matrix);
    for (Eigen::Index i = 0; i < 4; ++i) {
        const cplx l = es.eigenvalues()(i);
        CHECK(std::min(std::abs(l - (-0.5 * I + c)), std::abs(l - (-0.5 * I - c))) < 1e-13);
    }
}

TEST_CASE("matrix CSV lists every entry") {
    CMat m(2, 2);
    m << cplx(1, 2), cplx(3, 4), cplx(5, 6), cplx(7, 8);
    std::ostringstream os;
    write_matrix_csv(os, m);
    const std::string s = os.str();
    CHECK(s.rfind("row,col,re,im\n", 0) == 0);
    CHECK(s.find("1,0,5,6\n") != std::string::npos);
    CHECK(std::count(s.begin(), s.end(), '\n') == 5);
    CHECK_THROWS_AS(assemble(EmitterGeometry{}), ValidationError);
}
