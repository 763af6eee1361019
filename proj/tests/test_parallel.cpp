#include "chiral/bloch.hpp"
#include "chiral/dynamics.hpp"
#include "chiral/field.hpp"
#include "chiral/hamiltonian.hpp"
#include "chiral/parallel.hpp"

#include <doctest.h>

#include <cstring>

using namespace chiral;

namespace {

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

struct ThreadGuard {
    int saved = parallel::threads_count();
    ~ThreadGuard() { parallel::set_threads(saved); }
};

}  // namespace

TEST_CASE("parallel kernels reproduce the serial references bit for bit") {
    ThreadGuard guard;
    HelixParams p;
    p.turns = 8;
    const auto g = build_helix(p);
    for (int threads : {1, 3}) {
        parallel::set_threads(threads);
        CAPTURE(threads);
        const CouplingTensor a = assemble(g), b = assemble_serial(g);
        CHECK(a.coherent == b.coherent);
        CHECK(a.dissipative == b.dissipative);

        const Propagator prop(effective(a, false));
        const auto init = initial_state(static_cast<Eigen::Index>(g.size()), 0, 0.5);
        const auto z = g.z_coordinates();
        const auto times = uniform_times(10.0, 41);
        const auto s1 = evolve(init, prop, z, times), s2 = evolve_serial(init, prop, z, times);
        CHECK(same_bits(s1.trace, s2.trace));
        CHECK(same_bits(s1.p_up, s2.p_up));
        CHECK(same_bits(s1.z_com, s2.z_com));

        FieldPlane plane = default_plane(g, p.radius);
        plane.nu = 15;
        plane.nv = 25;
        const auto state = prop.evolve_states(init, {2.0}).front();
        const auto f1 = intensity_map(g, state, plane), f2 = intensity_map_serial(g, state, plane);
        for (int s = 0; s < 2; ++s) CHECK(same_bits(f1[s].values, f2[s].values));

        const LatticeCouplings lat(p, 200, false);
        const auto grid = brillouin_grid(p.pitch, 31);
        const BandStructure b1 = band_structure(lat, grid), b2 = band_structure_serial(lat, grid);
        bool equal = true;
        for (std::size_t i = 0; i < grid.size(); ++i)
            for (int n = 0; n < b1.bands(); ++n)
                equal = equal && b1.modes[i][n].eigenvalue == b2.modes[i][n].eigenvalue &&
                        b1.modes[i][n].sz == b2.modes[i][n].sz && b1.modes[i][n].velocity == b2.modes[i][n].velocity;
        CHECK(equal);
    }
}

TEST_CASE("thread count controls") {
    ThreadGuard guard;
    parallel::set_threads(2);
    CHECK(parallel::threads_count() == 2);
    parallel::set_threads(0);  // ignored
    CHECK(parallel::threads_count() == 2);
}
