#include "chiral/runner.hpp"

#include "chiral/checks.hpp"
#include "chiral/dynamics.hpp"
#include "chiral/hamiltonian.hpp"
#include "chiral/output.hpp"
#include "chiral/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

namespace chiral {

namespace fs = std::filesystem;
using nlohmann::json;

EmitterGeometry resolve_geometry(const RunConfig& config, const fs::path& base_dir) {
    if (config.geometry.helix) return build_helix(*config.geometry.helix);
    if (config.geometry.file) {
        fs::path p = *config.geometry.file;
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        return load_geometry_file(p);
    }
    throw ValidationError("configuration has no geometry");
}

Eigen::Index resolve_site(const SiteSpec& site, const EmitterGeometry& geom) {
    const auto n = static_cast<Eigen::Index>(geom.size());
    if (site.kind == SiteSpec::Kind::Index) {
        if (site.index < 0 || site.index >= n)
            throw ValidationError("initial site " + std::to_string(site.index) + " out of range");
        return site.index;
    }
    const auto z = geom.z_coordinates();
    const auto it = site.kind == SiteSpec::Kind::Bottom ? std::min_element(z.begin(), z.end())
                                                        : std::max_element(z.begin(), z.end());
    return static_cast<Eigen::Index>(std::distance(z.begin(), it));
}

namespace {

double transverse_radius(const EmitterGeometry& geom) {
    if (geom.source) return geom.source->radius;
    double r = 0.0;
    for (const auto& p : geom.positions) r = std::max(r, std::hypot(p.x(), p.y()));
    return r > 0.0 ? r : 0.05;
}

const HelixParams& require_helix(const RunConfig& config) {
    if (!config.geometry.helix) throw ValidationError("this mode needs an inline helix geometry");
    return *config.geometry.helix;
}

void dump_matrices(const CouplingTensor& c, const fs::path& dir, json& outputs) {
    for (const auto& [name, m] : {std::pair<const char*, const CMat*>{"J.csv", &c.coherent}, {"Gamma.csv", &c.dissipative}}) {
        std::ofstream out(dir / name);
        write_matrix_csv(out, *m);
        outputs.push_back(name);
    }
}

void run_dynamics(const RunConfig& cfg, const EmitterGeometry& geom, const RunOptions& opt, const fs::path& dir,
                  json& manifest, std::ostream& log) {
    const CouplingTensor coupling = assemble(geom);
    if (opt.dump_matrices) dump_matrices(coupling, dir, manifest["outputs"]);
    const Propagator prop(effective(coupling, cfg.hermitian_only));
    const auto site = resolve_site(cfg.initial_state.site, geom);
    const ExcitationState init = initial_state(static_cast<Eigen::Index>(geom.size()), site, cfg.initial_state.p_up);
    const auto z = geom.z_coordinates();
    const auto times = uniform_times(cfg.time_grid.t_max, cfg.time_grid.points);

    ObservableSeries series = evolve(init, prop, z, times);
    series.eta = helicity(series, cfg.helicity.dead_band, cfg.helicity.window);
    write_timeseries_csv(dir / "timeseries.csv", series);
    manifest["outputs"].push_back("timeseries.csv");

    std::vector<double> snaps = cfg.time_grid.snapshots;
    std::sort(snaps.begin(), snaps.end());
    const auto snap_states = prop.evolve_states(init, snaps);
    json snap_info = json::array();
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        const Observables o = measure(snap_states[i], z);
        const std::string name = "snapshot_t" + format_number(snaps[i]) + ".csv";
        write_snapshot_csv(dir / name, o, z);
        manifest["outputs"].push_back(name);
        snap_info.push_back({{"t", snaps[i]}, {"P_up", o.p_up}, {"P_down", o.p_down}, {"trace", o.trace}});
    }

    // tau diagnostic: populations at tau and the far-end arrival estimate.
    const double tau = cfg.time_grid.tau;
    const Observables at_tau = measure(prop.evolve_states(init, {tau}).front(), z);
    const auto top = resolve_site({SiteSpec::Kind::Top, 0}, geom);
    const auto bottom = resolve_site({SiteSpec::Kind::Bottom, 0}, geom);
    const auto far = static_cast<std::size_t>(site == bottom ? top : bottom);
    const bool dissipative = !cfg.hermitian_only;
    double max_rise = 0.0;
    for (std::size_t i = 1; i < series.trace.size(); ++i) max_rise = std::max(max_rise, series.trace[i] - series.trace[i - 1]);

    std::size_t near_tau = 0;
    for (std::size_t i = 1; i < series.times.size(); ++i)
        if (std::abs(series.times[i] - tau) < std::abs(series.times[near_tau] - tau)) near_tau = i;

    manifest["diagnostics"] = {
        {"propagator", prop.method() == PropagationMethod::Spectral ? "spectral" : "rk4-fallback"},
        {"eigenvector_condition_number", prop.condition_number()},
        {"launch_site", site},
        {"tau", tau},
        {"P_up_at_tau", at_tau.p_up},
        {"P_down_at_tau", at_tau.p_down},
        {"eta_near_tau", {{"t", series.times[near_tau]}, {"eta", static_cast<int>(series.eta[near_tau])}}},
        {"arrival_time_far_end", arrival_time(series, far)},
        {"max_norm_increase", dissipative ? max_rise : 0.0},
        {"snapshots", snap_info}};
    log << "dynamics: N=" << geom.size() << " P_up(tau)=" << at_tau.p_up << " P_down(tau)=" << at_tau.p_down << '\n';
}

void run_bands(const RunConfig& cfg, const fs::path& dir, json& manifest, std::ostream& log) {
    const HelixParams& p = require_helix(cfg);
    const auto grid = brillouin_grid(p.pitch, cfg.bands.k_points);
    const BandStructure bs = band_structure(p, grid, cfg.bands.cutoff_cells, cfg.hermitian_only);
    write_bands_csv(dir / "bands.csv", bs);
    manifest["outputs"].push_back("bands.csv");
    const GapDescriptor gap = detect_gap(bs);
    manifest["diagnostics"] = {{"lattice_sum_convergence", bs.max_convergence()},
                               {"cutoff_cells", bs.cutoff_cells},
                               {"ambiguous_continuation_steps", bs.ambiguous_steps()},
                               {"gap_width", gap.width},
                               {"bands_below_gap", gap.bands_below}};
    log << "bands: " << bs.bands() << " bands on " << grid.size() << " k points, convergence "
        << bs.max_convergence() << '\n';
}

void run_zak(const RunConfig& cfg, const fs::path& dir, json& manifest, std::ostream& log) {
    const HelixParams& p = require_helix(cfg);
    const LatticeCouplings lattice(p, cfg.zak.cutoff_cells, !cfg.zak.biorthogonal);
    std::vector<BandGroup> groups;
    if (cfg.zak.band_group == "both")
        groups = {BandGroup::Lower, BandGroup::Upper};
    else
        groups = {band_group_from_string(cfg.zak.band_group)};
    json records = json::array();
    for (BandGroup g : groups) {
        const ZakResult r = zak_phase(lattice, g, cfg.zak.n_k);
        const json rec = zak_record(r);
        const std::string name = std::string("zak_") + to_string(g) + ".json";
        write_json(dir / name, rec);
        manifest["outputs"].push_back(name);
        records.push_back(rec);
        log << "zak: N=" << p.sites_per_turn << ' ' << to_string(g) << " phase=" << r.phase
            << " residual=" << r.residual << " gap=" << r.gap_width << '\n';
    }
    manifest["diagnostics"] = {{"results", records}, {"biorthogonal", cfg.zak.biorthogonal}};
}

void run_field(const RunConfig& cfg, const EmitterGeometry& geom, const fs::path& dir, json& manifest,
               std::ostream& log) {
    const Propagator prop(effective(assemble(geom), cfg.hermitian_only));
    const auto site = resolve_site(cfg.initial_state.site, geom);
    const ExcitationState init = initial_state(static_cast<Eigen::Index>(geom.size()), site, cfg.initial_state.p_up);
    const FieldPlane plane = cfg.field.plane ? *cfg.field.plane : default_plane(geom, transverse_radius(geom));
    std::vector<double> times = cfg.field.times;
    std::sort(times.begin(), times.end());
    json info = json::array();
    for (const auto& maps : intensity_maps(geom, init, prop, plane, times, cfg.field.normalize)) {
        for (const auto& m : maps) {
            const std::string stem = "field_t" + format_number(m.time) + "_" + to_string(m.spin);
            write_field_csv(dir / (stem + ".csv"), m);
            write_json(dir / (stem + ".json"), field_metadata(m));
            manifest["outputs"].push_back(stem + ".csv");
            manifest["outputs"].push_back(stem + ".json");
        }
        info.push_back({{"t", maps[0].time},
                        {"max_up", maps[0].max},
                        {"max_down", maps[1].max},
                        {"centroid_v", intensity_centroid_v(maps[0], maps[1])}});
        log << "field: t=" << maps[0].time << " max_up=" << maps[0].max << " max_down=" << maps[1].max << '\n';
    }
    manifest["diagnostics"] = {{"maps", info},
                               {"propagator", prop.method() == PropagationMethod::Spectral ? "spectral" : "rk4-fallback"}};
}

int run_check(const RunConfig& cfg, const EmitterGeometry& geom, const fs::path& dir, json& manifest,
              std::ostream& log) {
    CheckOptions opt;
    opt.hermitian_only = cfg.hermitian_only;
    const auto results = run_invariant_suite(geom, opt);
    json report = json::array();
    bool ok = true;
    for (const auto& r : results) {
        ok = ok && r.passed;
        report.push_back({{"name", r.name}, {"passed", r.passed}, {"value", r.value}, {"tolerance", r.tolerance},
                          {"detail", r.detail}});
        log << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.value << " <= " << r.tolerance << ")\n";
    }
    write_json(dir / "check_report.json", report);
    manifest["outputs"].push_back("check_report.json");
    manifest["diagnostics"] = {{"checks", results.size()}, {"all_passed", ok}};
    return ok ? kExitOk : kExitNumerical;
}

}  // namespace

RunOutcome run(const RunConfig& config, const RunOptions& options, std::ostream& log) {
    const fs::path dir = options.output_dir ? fs::path(*options.output_dir) : fs::path(config.output_dir);
    fs::create_directories(dir);
    const json cfg_json = to_json(config);

    RunOutcome outcome;
    json& manifest = outcome.manifest;
    manifest["tool"] = "chiral";
    manifest["engine_version"] = kEngineVersion;
    manifest["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                "." + std::to_string(EIGEN_MINOR_VERSION);
    manifest["mode"] = to_string(config.mode);
    manifest["config"] = cfg_json;
    manifest["config_hash"] = "fnv1a64:" + fnv1a64_hex(cfg_json.dump());
    manifest["threads"] = parallel::threads_count();
    manifest["units"] = "lambda0 = 1, Gamma0 = 1, times in 1/Gamma0";
    manifest["basis_ordering"] = "site-major: index = 2*site + spin (up = 0, down = 1)";
    manifest["outputs"] = json::array();

    switch (config.mode) {
        case Mode::Dynamics:
            run_dynamics(config, resolve_geometry(config, options.config_dir), options, dir, manifest, log);
            break;
        case Mode::Bands: run_bands(config, dir, manifest, log); break;
        case Mode::Zak: run_zak(config, dir, manifest, log); break;
        case Mode::Field:
            run_field(config, resolve_geometry(config, options.config_dir), dir, manifest, log);
            break;
        case Mode::Check:
            outcome.exit_code = run_check(config, resolve_geometry(config, options.config_dir), dir, manifest, log);
            break;
    }
    manifest["exit_code"] = outcome.exit_code;
    write_json(dir / "manifest.json", manifest);
    return outcome;
}

}  // namespace chiral
