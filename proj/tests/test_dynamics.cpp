#include "chiral/dynamics.hpp"
#include "chiral/greens.hpp"
#include "chiral/hamiltonian.hpp"

#include <doctest.h>

#include <cmath>

using namespace chiral;

namespace {

HelixParams helix(Handedness h, int turns = 20) {
    HelixParams p;
    p.turns = turns;
    p.handedness = h;
    return p;
}

ObservableSeries run(const EmitterGeometry& g, Eigen::Index site, double p_up, bool hermitian,
                     const std::vector<double>& times) {
    const Propagator prop(effective(assemble(g), hermitian));
    return evolve(initial_state(static_cast<Eigen::Index>(g.size()), site, p_up), prop, g.z_coordinates(), times);
}

}  // namespace

TEST_CASE("initial states") {
    const auto s = initial_state(4, 2, 0.5);
    REQUIRE(s.branches.size() == 2);
    CHECK(s.trace() == doctest::Approx(1.0));
    CHECK(s.branches[0].amplitudes(basis_index(2, Spin::Up)) == cplx(1.0));
    CHECK(s.branches[1].amplitudes(basis_index(2, Spin::Down)) == cplx(1.0));
    const CMat rho = s.density_matrix();
    CHECK(rho(4, 4) == cplx(0.5));
    CHECK(rho(4, 5) == cplx(0.0));

    CHECK(initial_state(4, 0, 1.0).branches.size() == 1);
    const auto down = initial_state(4, 0, 0.0);
    REQUIRE(down.branches.size() == 1);
    CHECK(down.branches[0].amplitudes(1) == cplx(1.0));

    CHECK_THROWS_AS(initial_state(4, 4, 0.5), ValidationError);
    CHECK_THROWS_AS(initial_state(4, -1, 0.5), ValidationError);
    CHECK_THROWS_WITH_AS(initial_state(4, 0, 1.5), "p_up must lie in [0, 1]", ValidationError);
}

TEST_CASE("a single emitter decays as exp(-Gamma0 t)") {
    const auto g = make_geometry({{0, 0, 0}}, "one");
    const auto times = uniform_times(5.0, 11);
    const auto s = run(g, 0, 0.3, false, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
        CHECK(s.trace[i] == doctest::Approx(std::exp(-times[i])).epsilon(1e-13));
        CHECK(s.p_up[i] == doctest::Approx(0.3 * std::exp(-times[i])).epsilon(1e-13));
    }
    const auto rep = master_equation_check(initial_state(1, 0, 0.5), assemble(g), false, 3.0, g.z_coordinates());
    CHECK(rep.deviation < 1e-10);
}

TEST_CASE("two axial emitters: closed-form amplitude exp(-t/2) cos(c t)") {
    const auto g = make_geometry({{0, 0, 0}, {0, 0, 0.21}}, "pair");
    const cplx c = pair_coupling(g.positions[0], g.positions[1]).effective()(0, 0);
    const auto times = uniform_times(6.0, 25);
    const auto s = run(g, 0, 1.0, false, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        const double p0 = std::norm(std::exp(-0.5 * t) * std::cos(c * t));
        const double p1 = std::norm(std::exp(-0.5 * t) * I * std::sin(c * t));
        CHECK(std::abs(s.site_up[i][0] - p0) < 1e-12);
        CHECK(std::abs(s.site_up[i][1] - p1) < 1e-12);
        CHECK(s.p_down[i] == 0.0);
    }
}

TEST_CASE("observable identities on the reference helix") {
    const auto g = build_helix(helix(Handedness::Left));
    const auto times = uniform_times(15.8, 60);
    const auto s = run(g, 0, 0.5, false, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
        CHECK(std::abs(s.p_up[i] + s.p_down[i] - s.trace[i]) < 1e-10);
        CHECK(std::abs(s.sz[i] - (s.p_up[i] - s.p_down[i])) < 1e-12);
        double sum = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) sum += s.site_up[i][j] + s.site_down[i][j];
        CHECK(std::abs(sum - s.trace[i]) < 1e-12);
        if (i > 0) CHECK(s.trace[i] <= s.trace[i - 1] + 1e-10);
    }
    const auto h = run(g, 0, 0.5, true, times);
    for (double t : h.trace) CHECK(std::abs(t - 1.0) < 1e-8);
}

TEST_CASE("mirror and launch-inversion symmetries") {
    const auto left = build_helix(helix(Handedness::Left));
    const auto right = build_helix(helix(Handedness::Right));
    const auto times = uniform_times(15.8, 80);
    const auto top = static_cast<Eigen::Index>(left.size() - 1);
    const auto lb = run(left, 0, 0.5, false, times), rb = run(right, 0, 0.5, false, times);
    const auto lt = run(left, top, 0.5, false, times);
    const double zmax = left.positions.back().z();
    for (std::size_t i = 0; i < times.size(); ++i) {
        CHECK(std::abs(lb.p_up[i] - rb.p_down[i]) < 1e-10);
        CHECK(std::abs(lb.p_down[i] - rb.p_up[i]) < 1e-10);
        // Top launch is the bottom launch turned upside down with spins swapped.
        CHECK(std::abs(lt.p_up[i] - lb.p_down[i]) < 1e-10);
        CHECK(std::abs(lt.z_com[i] - (zmax - lb.z_com[i])) < 1e-10);
    }
    const std::size_t it = 40;  // t = 8.0, next to tau
    CHECK(lb.p_down[it] > lb.p_up[it]);
}

TEST_CASE("time-stepping fallback agrees with the spectral propagator") {
    const auto g = build_helix(helix(Handedness::Left, 2));
    const EffectiveHamiltonian h = effective(assemble(g), false);
    const Propagator spectral(h);
    const Propagator stepping(h, 0.0);
    CHECK(spectral.method() == PropagationMethod::Spectral);
    CHECK(stepping.method() == PropagationMethod::TimeStepping);
    CHECK(spectral.condition_number() >= 1.0);
    const auto init = initial_state(static_cast<Eigen::Index>(g.size()), 1, 0.5);
    const auto z = g.z_coordinates();
    const auto times = uniform_times(3.0, 7);
    const auto a = evolve(init, spectral, z, times), b = evolve(init, stepping, z, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
        CHECK(std::abs(a.p_up[i] - b.p_up[i]) < 1e-9);
        CHECK(std::abs(a.z_com[i] - b.z_com[i]) < 1e-9);
    }
    CHECK_THROWS_AS(spectral.evolve_states(init, {2.0, 1.0}), ValidationError);
}

TEST_CASE("master-equation oracle") {
    HelixParams p;
    p.turns = 2;
    p.radius = 0.08;
    p.pitch = 0.3;
    const auto g = build_helix(p);
    const auto c = assemble(g);
    const auto init = initial_state(6, 2, 0.7);
    const auto d = master_equation_check(init, c, false, 5.0, g.z_coordinates());
    CHECK(d.deviation < 1e-6);
    const auto h = master_equation_check(init, c, true, 5.0, g.z_coordinates());
    CHECK(h.deviation < 1e-8);
    CHECK(h.norm_drift < 1e-8);
    HelixParams big;
    big.turns = 3;
    const auto gb = build_helix(big);
    CHECK_THROWS_AS(master_equation_check(initial_state(9, 0, 0.5), assemble(gb), false, 1.0, gb.z_coordinates()),
                    ValidationError);
}

TEST_CASE("helicity estimator") {
    ObservableSeries s;
    s.times = {0.0, 1.0, 2.0, 3.0};
    SUBCASE("rising centroid with positive S_z") {
        s.z_com = {0.0, 0.1, 0.2, 0.3};
        s.sz = {0.2, 0.2, 0.2, 0.2};
        for (Helicity h : helicity(s)) CHECK(h == Helicity::Positive);
    }
    SUBCASE("negative product") {
        s.z_com = {0.0, 0.1, 0.2, 0.3};
        s.sz = {-0.2, -0.2, -0.2, -0.2};
        CHECK(helicity(s)[1] == Helicity::Negative);
    }
    SUBCASE("balanced stationary state is undefined") {
        s.z_com = {0.5, 0.5, 0.5, 0.5};
        s.sz = {0.0, 0.0, 0.0, 0.0};
        for (Helicity h : helicity(s)) CHECK(h == Helicity::Undefined);
    }
    SUBCASE("dead band") {
        s.z_com = {0.0, 1e-7, 2e-7, 3e-7};
        s.sz = {1.0, 1.0, 1.0, 1.0};
        CHECK(helicity(s)[1] == Helicity::Undefined);
        CHECK(helicity(s, 1e-9)[1] == Helicity::Positive);
    }
}

TEST_CASE("time grid and arrival diagnostic") {
    const auto t = uniform_times(15.8, 200);
    REQUIRE(t.size() == 200);
    CHECK(t.front() == 0.0);
    CHECK(t.back() == doctest::Approx(15.8));
    CHECK_THROWS_AS(uniform_times(-1.0, 10), ValidationError);

    const auto g = build_helix(helix(Handedness::Left, 6));
    const auto s = run(g, 0, 0.5, false, uniform_times(20.0, 400));
    const double arrival = arrival_time(s, g.size() - 1);
    CHECK(arrival > 0.0);
    CHECK(arrival < 20.0);
}
