#include "chiral/bloch.hpp"
#include "chiral/dynamics.hpp"
#include "chiral/field.hpp"
#include "chiral/geometry.hpp"
#include "chiral/hamiltonian.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace chiral;

HelixParams helix(int turns) {
    HelixParams p;
    p.turns = turns;
    return p;
}

void BM_AssembleSerial(benchmark::State& st) {
    const auto g = build_helix(helix(static_cast<int>(st.range(0))));
    for (auto _ : st) benchmark::DoNotOptimize(assemble_serial(g));
}
void BM_AssembleParallel(benchmark::State& st) {
    const auto g = build_helix(helix(static_cast<int>(st.range(0))));
    for (auto _ : st) benchmark::DoNotOptimize(assemble(g));
}
BENCHMARK(BM_AssembleSerial)->Arg(20)->Arg(80);
BENCHMARK(BM_AssembleParallel)->Arg(20)->Arg(80);

void BM_BandsSerial(benchmark::State& st) {
    const LatticeCouplings lat(HelixParams{}, 500, false);
    const auto grid = brillouin_grid(lat.params().pitch, 101);
    for (auto _ : st) benchmark::DoNotOptimize(band_structure_serial(lat, grid));
}
void BM_BandsParallel(benchmark::State& st) {
    const LatticeCouplings lat(HelixParams{}, 500, false);
    const auto grid = brillouin_grid(lat.params().pitch, 101);
    for (auto _ : st) benchmark::DoNotOptimize(band_structure(lat, grid));
}
BENCHMARK(BM_BandsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BandsParallel)->Unit(benchmark::kMillisecond);

struct FieldFixture {
    EmitterGeometry geom = build_helix(HelixParams{});
    Propagator prop{effective(assemble(geom), false)};
    ExcitationState state = prop.evolve_states(initial_state(static_cast<Eigen::Index>(geom.size()), 0, 0.5), {1.0}).front();
    FieldPlane plane = default_plane(geom, 0.05);
};

void BM_FieldSerial(benchmark::State& st) {
    FieldFixture f;
    for (auto _ : st) benchmark::DoNotOptimize(intensity_map_serial(f.geom, f.state, f.plane));
}
void BM_FieldParallel(benchmark::State& st) {
    FieldFixture f;
    for (auto _ : st) benchmark::DoNotOptimize(intensity_map(f.geom, f.state, f.plane));
}
BENCHMARK(BM_FieldSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FieldParallel)->Unit(benchmark::kMillisecond);

void BM_EvolveSerial(benchmark::State& st) {
    FieldFixture f;
    const auto z = f.geom.z_coordinates();
    const auto t = uniform_times(15.8, 200);
    const auto init = initial_state(static_cast<Eigen::Index>(f.geom.size()), 0, 0.5);
    for (auto _ : st) benchmark::DoNotOptimize(evolve_serial(init, f.prop, z, t));
}
void BM_EvolveParallel(benchmark::State& st) {
    FieldFixture f;
    const auto z = f.geom.z_coordinates();
    const auto t = uniform_times(15.8, 200);
    const auto init = initial_state(static_cast<Eigen::Index>(f.geom.size()), 0, 0.5);
    for (auto _ : st) benchmark::DoNotOptimize(evolve(init, f.prop, z, t));
}
BENCHMARK(BM_EvolveSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvolveParallel)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
