#include "chiral/runner.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace chiral;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int cli(const std::string& args) {
    const std::string cmd = std::string(CHIRAL_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write(const fs::path& p, const json& doc) { std::ofstream(p) << doc.dump(2); }

json read(const fs::path& p) { return json::parse(std::ifstream(p)); }

json small(const std::string& mode) {
    json doc = {{"mode", mode},
                {"geometry",
                 {{"helix", {{"radius", 0.05}, {"pitch", 0.175}, {"sites_per_turn", 3}, {"turns", 3}, {"handedness", "left"}}}}}};
    return doc;
}

}  // namespace

TEST_CASE("dynamics run writes series, snapshots, matrices and a manifest") {
    TempDir tmp("chiral_cli_dynamics");
    json doc = small("dynamics");
    doc["time_grid"] = {{"t_max", 4.0}, {"points", 21}, {"tau", 2.0}, {"snapshots", {2.0}}};
    write(tmp.path / "c.json", doc);
    const fs::path out = tmp.path / "out";
    REQUIRE(cli("dynamics --config " + (tmp.path / "c.json").string() + " --out " + out.string() +
                " --threads 2 --dump-matrices") == 0);
    for (const char* f : {"timeseries.csv", "snapshot_t2.csv", "J.csv", "Gamma.csv", "manifest.json"})
        CHECK(fs::exists(out / f));
    std::ifstream ts(out / "timeseries.csv");
    std::string header;
    std::getline(ts, header);
    CHECK(header == "t,trace,P_up,P_down,Sz,z_com,eta");
    const json m = read(out / "manifest.json");
    CHECK(m["mode"] == "dynamics");
    CHECK(m["threads"] == 2);
    CHECK(m["config_hash"].get<std::string>().rfind("fnv1a64:", 0) == 0);
    CHECK(m["diagnostics"]["propagator"] == "spectral");
    CHECK(m["config"]["time_grid"]["tau"] == 2.0);
    // Same config, same hash.
    REQUIRE(cli("run -c " + (tmp.path / "c.json").string() + " -o " + (tmp.path / "again").string()) == 0);
    CHECK(read(tmp.path / "again" / "manifest.json")["config_hash"] == m["config_hash"]);
}

TEST_CASE("exit codes") {
    TempDir tmp("chiral_cli_codes");
    write(tmp.path / "ok.json", small("bands"));
    json bad = small("dynamics");
    bad["initial_state"] = {{"p_up", 2.0}};
    write(tmp.path / "bad.json", bad);
    std::ofstream(tmp.path / "broken.json") << "{ not json";

    CHECK(cli("validate -c " + (tmp.path / "ok.json").string()) == 0);
    CHECK(cli("validate -c " + (tmp.path / "bad.json").string()) == 1);
    CHECK(cli("dynamics -c " + (tmp.path / "bad.json").string()) == 1);
    CHECK(cli("run -c " + (tmp.path / "broken.json").string()) == 1);
    CHECK(cli("run -c " + (tmp.path / "missing.json").string()) == 1);
    CHECK(cli("zak -c " + (tmp.path / "ok.json").string()) == 1);  // mode mismatch
    CHECK(cli("frobnicate") == 1);
    CHECK(cli("") == 1);
}

TEST_CASE("runner modes") {
    TempDir tmp("chiral_runner_modes");
    std::ostringstream log;

    SUBCASE("zak writes both groups") {
        json doc = small("zak");
        doc["zak"] = {{"n_k", 60}, {"cutoff_cells", 100}};
        RunOptions opt;
        opt.output_dir = (tmp.path / "zak").string();
        const auto r = run(parse_config(doc), opt, log);
        CHECK(r.exit_code == kExitOk);
        const json lower = read(tmp.path / "zak" / "zak_lower.json");
        CHECK(lower["n_sites_per_turn"] == 3);
        CHECK(lower["band_group"] == "lower");
        CHECK(std::abs(std::abs(lower["zak_phase"].get<double>()) - kPi) < 1e-6);
        CHECK(fs::exists(tmp.path / "zak" / "zak_upper.json"));
    }
    SUBCASE("bands") {
        json doc = small("bands");
        doc["bands"] = {{"k_points", 21}, {"cutoff_cells", 50}};
        RunOptions opt;
        opt.output_dir = (tmp.path / "bands").string();
        run(parse_config(doc), opt, log);
        std::ifstream in(tmp.path / "bands" / "bands.csv");
        std::string header;
        std::getline(in, header);
        CHECK(header == "k,band,energy,gamma,sz,v,in_light_cone");
        CHECK(read(tmp.path / "bands" / "manifest.json")["diagnostics"]["cutoff_cells"] == 50);
    }
    SUBCASE("field") {
        json doc = small("field");
        doc["field"] = {{"times", {1.0}},
                        {"plane", {{"normal", "x"}, {"offset", 0.5}, {"u_center", 0.0}, {"u_half", 0.15},
                                   {"v_center", 0.25}, {"v_half", 0.3}, {"nu", 5}, {"nv", 7}}}};
        RunOptions opt;
        opt.output_dir = (tmp.path / "field").string();
        run(parse_config(doc), opt, log);
        CHECK(fs::exists(tmp.path / "field" / "field_t1_up.csv"));
        CHECK(fs::exists(tmp.path / "field" / "field_t1_down.csv"));
        const json meta = read(tmp.path / "field" / "field_t1_up.json");
        CHECK(meta["polarization"] == "up");
        CHECK(meta["plane"]["nu"] == 5);
    }
    SUBCASE("check mode") {
        RunOptions opt;
        opt.output_dir = (tmp.path / "check").string();
        json doc = small("check");
        doc["geometry"]["helix"]["turns"] = 2;
        const auto r = run(parse_config(doc), opt, log);
        CHECK(r.exit_code == kExitOk);
        const json report = read(tmp.path / "check" / "check_report.json");
        CHECK(report.size() > 10);
        for (const auto& c : report) CHECK_MESSAGE(c["passed"].get<bool>(), c["name"].get<std::string>());
    }
    SUBCASE("geometry file relative to the config directory") {
        std::ofstream(tmp.path / "pts.json") << R"({"positions": [[0,0,0],[0,0,0.2],[0.05,0,0.4]], "label": "three"})";
        json doc = {{"mode", "dynamics"}, {"geometry", {{"file", "pts.json"}}}, {"initial_state", {{"site", "top"}}},
                    {"time_grid", {{"t_max", 1.0}, {"points", 5}}}};
        RunOptions opt;
        opt.output_dir = (tmp.path / "file").string();
        opt.config_dir = tmp.path;
        const RunConfig cfg = parse_config(doc);
        const auto geom = resolve_geometry(cfg, tmp.path);
        CHECK(geom.label == "three");
        CHECK(resolve_site(cfg.initial_state.site, geom) == 2);
        CHECK(run(cfg, opt, log).manifest["diagnostics"]["launch_site"] == 2);
        CHECK_THROWS_AS(resolve_site({SiteSpec::Kind::Index, 3}, geom), ValidationError);
    }
}
