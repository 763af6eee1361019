#include "chiral/config.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace chiral;
using nlohmann::json;

namespace {

json minimal() {
    return json::parse(R"({
      "mode": "dynamics",
      "geometry": {"helix": {"radius": 0.05, "pitch": 0.175, "sites_per_turn": 3, "turns": 20, "handedness": "left"}}
    })");
}

bool has_error(const std::vector<std::string>& errors, const std::string& text) {
    for (const auto& e : errors)
        if (e.find(text) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_CASE("minimal config takes the documented defaults") {
    const RunConfig c = parse_config(minimal());
    CHECK(c.mode == Mode::Dynamics);
    REQUIRE(c.geometry.helix.has_value());
    CHECK(*c.geometry.helix == HelixParams{});
    CHECK(c.initial_state.p_up == 0.5);
    CHECK(c.initial_state.site.kind == SiteSpec::Kind::Bottom);
    CHECK(c.time_grid.tau == 7.9);
    CHECK(c.time_grid.t_max == 15.8);
    CHECK(c.time_grid.points == 200);
    CHECK(c.helicity.dead_band == 1e-6);
    CHECK(c.bands.cutoff_cells == 2000);
    CHECK(c.zak.n_k == 400);
    CHECK(c.zak.band_group == "both");
    CHECK_FALSE(c.hermitian_only);
}

TEST_CASE("configs round-trip through JSON") {
    json doc = minimal();
    doc["mode"] = "field";
    doc["initial_state"] = {{"site", 7}, {"p_up", 1.0}};
    doc["field"] = {{"times", {1.0, 7.9}},
                    {"normalize", true},
                    {"plane", {{"normal", "y"}, {"offset", 0.5}, {"u_center", 1.0}, {"u_half", 2.0},
                               {"v_center", 0.0}, {"v_half", 0.3}, {"nu", 11}, {"nv", 13}}}};
    doc["zak"] = {{"band_group", "all"}, {"biorthogonal", true}};
    doc["hermitian_only"] = true;
    const RunConfig c = parse_config(doc);
    CHECK(c.initial_state.site.kind == SiteSpec::Kind::Index);
    CHECK(c.initial_state.site.index == 7);
    REQUIRE(c.field.plane.has_value());
    CHECK(c.field.plane->normal == Axis::Y);
    const RunConfig back = parse_config(to_json(c));
    CHECK(back == c);
    CHECK(to_json(back) == to_json(c));
}

TEST_CASE("validation reports precise errors") {
    SUBCASE("misspelled key") {
        json doc = minimal();
        doc["geometry"]["helix"]["pich"] = 0.2;
        CHECK(has_error(validate(doc), "unknown key \"pich\" in geometry.helix"));
    }
    SUBCASE("probability out of range") {
        json doc = minimal();
        doc["initial_state"] = {{"p_up", 1.2}};
        CHECK(has_error(validate(doc), "p_up must lie in [0, 1]"));
    }
    SUBCASE("site index beyond the helix") {
        json doc = minimal();
        doc["initial_state"] = {{"site", 60}};
        CHECK(has_error(validate(doc), "index 60 out of range"));
        doc["initial_state"] = {{"site", "middle"}};
        CHECK_FALSE(validate(doc).empty());
    }
    SUBCASE("geometry needs exactly one source") {
        json doc = minimal();
        doc["geometry"]["file"] = "g.json";
        CHECK(has_error(validate(doc), "exactly one"));
        doc["geometry"] = json::object();
        CHECK(has_error(validate(doc), "exactly one"));
    }
    SUBCASE("bad values") {
        json doc = minimal();
        doc["mode"] = "simulate";
        doc["geometry"]["helix"]["handedness"] = "sinister";
        doc["geometry"]["helix"]["radius"] = -0.1;
        doc["zak"] = {{"n_k", 10}, {"band_group", "middle"}};
        doc["time_grid"] = {{"snapshots", {3.0, -1.0}}};
        const auto errors = validate(doc);
        CHECK(has_error(errors, "unknown mode"));
        CHECK(has_error(errors, "handedness"));
        CHECK(has_error(errors, "radius"));
        CHECK(has_error(errors, "n_k"));
        CHECK(has_error(errors, "band_group"));
        CHECK(has_error(errors, "snapshots"));
        CHECK_THROWS_AS(parse_config(doc), ValidationError);
    }
    SUBCASE("missing required keys") {
        CHECK(has_error(validate(json::parse(R"({"mode": "bands"})")), "geometry"));
        CHECK_FALSE(validate(json::array()).empty());
    }
}

TEST_CASE("shipped configurations validate") {
    int count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(CHIRAL_CONFIG_DIR)) {
        if (entry.path().extension() != ".json") continue;
        CAPTURE(entry.path().string());
        CHECK_NOTHROW(load_config(entry.path().string()));
        ++count;
    }
    CHECK(count >= 10);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ValidationError);
}
