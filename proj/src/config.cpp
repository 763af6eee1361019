#include "chiral/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace chiral {

using nlohmann::json;

const char* to_string(Mode m) {
    switch (m) {
        case Mode::Dynamics: return "dynamics";
        case Mode::Bands: return "bands";
        case Mode::Zak: return "zak";
        case Mode::Field: return "field";
        case Mode::Check: return "check";
    }
    return "dynamics";
}

std::optional<Mode> mode_from_string(const std::string& s) {
    for (Mode m : {Mode::Dynamics, Mode::Bands, Mode::Zak, Mode::Field, Mode::Check})
        if (s == to_string(m)) return m;
    return std::nullopt;
}

namespace {

const char* axis_name(Axis a) { return a == Axis::X ? "x" : a == Axis::Y ? "y" : "z"; }

std::optional<Axis> axis_from_string(const std::string& s) {
    if (s == "x") return Axis::X;
    if (s == "y") return Axis::Y;
    if (s == "z") return Axis::Z;
    return std::nullopt;
}

// Collects every problem found while walking the document.
class Checker {
public:
    std::vector<std::string> errors;

    bool object(const json& j, const std::string& path, const std::set<std::string>& allowed,
                const std::set<std::string>& required = {}) {
        if (!j.is_object()) {
            errors.push_back(path + ": expected an object");
            return false;
        }
        for (const auto& [key, _] : j.items())
            if (!allowed.count(key)) errors.push_back("unknown key \"" + key + "\" in " + path);
        for (const auto& key : required)
            if (!j.contains(key)) errors.push_back(path + ": missing required key \"" + key + "\"");
        return true;
    }

    // Returns the number if present and numeric; records type errors.
    std::optional<double> number(const json& obj, const std::string& key, const std::string& path) {
        if (!obj.contains(key)) return std::nullopt;
        const auto& v = obj.at(key);
        if (!v.is_number()) {
            errors.push_back(path + "." + key + ": expected a number");
            return std::nullopt;
        }
        const double d = v.get<double>();
        if (!std::isfinite(d)) {
            errors.push_back(path + "." + key + ": must be finite");
            return std::nullopt;
        }
        return d;
    }

    std::optional<long> integer(const json& obj, const std::string& key, const std::string& path) {
        if (!obj.contains(key)) return std::nullopt;
        const auto& v = obj.at(key);
        if (!v.is_number_integer()) {
            errors.push_back(path + "." + key + ": expected an integer");
            return std::nullopt;
        }
        return v.get<long>();
    }

    void boolean(const json& obj, const std::string& key, const std::string& path) {
        if (obj.contains(key) && !obj.at(key).is_boolean()) errors.push_back(path + "." + key + ": expected a boolean");
    }

    std::optional<std::string> string(const json& obj, const std::string& key, const std::string& path) {
        if (!obj.contains(key)) return std::nullopt;
        if (!obj.at(key).is_string()) {
            errors.push_back(path + "." + key + ": expected a string");
            return std::nullopt;
        }
        return obj.at(key).get<std::string>();
    }

    void positive(const json& obj, const std::string& key, const std::string& path, const std::string& what) {
        if (auto v = number(obj, key, path); v && !(*v > 0.0)) errors.push_back(path + "." + key + ": " + what + " must be positive");
    }

    void at_least(const json& obj, const std::string& key, const std::string& path, long lo, const std::string& what) {
        if (auto v = integer(obj, key, path); v && *v < lo)
            errors.push_back(path + "." + key + ": " + what + " must be at least " + std::to_string(lo));
    }

    void number_list(const json& obj, const std::string& key, const std::string& path, bool non_negative) {
        if (!obj.contains(key)) return;
        const auto& v = obj.at(key);
        if (!v.is_array()) {
            errors.push_back(path + "." + key + ": expected an array of numbers");
            return;
        }
        for (const auto& x : v) {
            if (!x.is_number() || !std::isfinite(x.get<double>())) {
                errors.push_back(path + "." + key + ": expected an array of numbers");
                return;
            }
            if (non_negative && x.get<double>() < 0.0) {
                errors.push_back(path + "." + key + ": times must be non-negative");
                return;
            }
        }
    }
};

void check_helix(Checker& c, const json& h, const std::string& path) {
    if (!c.object(h, path, {"radius", "pitch", "sites_per_turn", "turns", "handedness"},
                  {"radius", "pitch", "sites_per_turn", "turns", "handedness"}))
        return;
    c.positive(h, "radius", path, "radius");
    c.positive(h, "pitch", path, "pitch");
    c.at_least(h, "sites_per_turn", path, 1, "sites_per_turn");
    c.at_least(h, "turns", path, 1, "turns");
    if (auto s = c.string(h, "handedness", path); s && *s != "left" && *s != "right")
        c.errors.push_back(path + ".handedness: must be \"left\" or \"right\"");
}

void check_plane(Checker& c, const json& p, const std::string& path) {
    if (p.is_null()) return;
    if (!c.object(p, path, {"normal", "offset", "u_center", "u_half", "v_center", "v_half", "nu", "nv"},
                  {"normal", "offset", "u_center", "u_half", "v_center", "v_half", "nu", "nv"}))
        return;
    if (auto s = c.string(p, "normal", path); s && !axis_from_string(*s))
        c.errors.push_back(path + ".normal: must be \"x\", \"y\" or \"z\"");
    c.number(p, "offset", path);
    c.number(p, "u_center", path);
    c.number(p, "v_center", path);
    for (const char* key : {"u_half", "v_half"})
        if (auto v = c.number(p, key, path); v && *v < 0.0) c.errors.push_back(path + "." + key + ": must be non-negative");
    c.at_least(p, "nu", path, 1, "nu");
    c.at_least(p, "nv", path, 1, "nv");
}

HelixParams helix_from_json(const json& h) {
    HelixParams p;
    p.radius = h.at("radius").get<double>();
    p.pitch = h.at("pitch").get<double>();
    p.sites_per_turn = h.at("sites_per_turn").get<int>();
    p.turns = h.at("turns").get<int>();
    p.handedness = h.at("handedness").get<std::string>() == "left" ? Handedness::Left : Handedness::Right;
    return p;
}

FieldPlane plane_from_json(const json& p) {
    FieldPlane plane;
    plane.normal = *axis_from_string(p.at("normal").get<std::string>());
    plane.offset = p.at("offset").get<double>();
    plane.u_center = p.at("u_center").get<double>();
    plane.u_half = p.at("u_half").get<double>();
    plane.v_center = p.at("v_center").get<double>();
    plane.v_half = p.at("v_half").get<double>();
    plane.nu = p.at("nu").get<int>();
    plane.nv = p.at("nv").get<int>();
    return plane;
}

}  // namespace

std::vector<std::string> validate(const json& doc) {
    Checker c;
    if (!c.object(doc, "config",
                  {"mode", "geometry", "initial_state", "hermitian_only", "time_grid", "helicity", "bands", "zak",
                   "field", "output_dir"},
                  {"mode", "geometry"}))
        return c.errors;

    if (auto m = c.string(doc, "mode", "config"); m && !mode_from_string(*m))
        c.errors.push_back("config.mode: unknown mode \"" + *m + "\"");

    long n_sites = -1;
    if (doc.contains("geometry")) {
        const auto& g = doc.at("geometry");
        if (c.object(g, "geometry", {"helix", "file"})) {
            const bool has_helix = g.contains("helix");
            const bool has_file = g.contains("file");
            if (has_helix == has_file) c.errors.push_back("geometry: specify exactly one of \"helix\" or \"file\"");
            if (has_helix) {
                const std::size_t before = c.errors.size();
                check_helix(c, g.at("helix"), "geometry.helix");
                if (c.errors.size() == before)
                    n_sites = g.at("helix").at("sites_per_turn").get<long>() * g.at("helix").at("turns").get<long>();
            }
            if (has_file) c.string(g, "file", "geometry");
        }
    }

    if (doc.contains("initial_state")) {
        const auto& s = doc.at("initial_state");
        if (c.object(s, "initial_state", {"site", "p_up"})) {
            if (s.contains("site")) {
                const auto& site = s.at("site");
                if (site.is_string()) {
                    const auto v = site.get<std::string>();
                    if (v != "bottom" && v != "top")
                        c.errors.push_back("initial_state.site: must be \"bottom\", \"top\" or a site index");
                } else if (site.is_number_integer()) {
                    const long idx = site.get<long>();
                    if (idx < 0 || (n_sites > 0 && idx >= n_sites))
                        c.errors.push_back("initial_state.site: index " + std::to_string(idx) + " out of range");
                } else {
                    c.errors.push_back("initial_state.site: must be \"bottom\", \"top\" or a site index");
                }
            }
            if (auto p = c.number(s, "p_up", "initial_state"); p && !(*p >= 0.0 && *p <= 1.0))
                c.errors.push_back("initial_state.p_up: p_up must lie in [0, 1]");
        }
    }

    c.boolean(doc, "hermitian_only", "config");

    if (doc.contains("time_grid")) {
        const auto& t = doc.at("time_grid");
        if (c.object(t, "time_grid", {"t_max", "points", "tau", "snapshots"})) {
            if (auto v = c.number(t, "t_max", "time_grid"); v && *v < 0.0)
                c.errors.push_back("time_grid.t_max: must be non-negative");
            c.at_least(t, "points", "time_grid", 2, "points");
            c.positive(t, "tau", "time_grid", "tau");
            c.number_list(t, "snapshots", "time_grid", true);
        }
    }

    if (doc.contains("helicity")) {
        const auto& h = doc.at("helicity");
        if (c.object(h, "helicity", {"dead_band", "window"})) {
            if (auto v = c.number(h, "dead_band", "helicity"); v && *v < 0.0)
                c.errors.push_back("helicity.dead_band: must be non-negative");
            c.at_least(h, "window", "helicity", 1, "window");
        }
    }

    if (doc.contains("bands")) {
        const auto& b = doc.at("bands");
        if (c.object(b, "bands", {"k_points", "cutoff_cells"})) {
            c.at_least(b, "k_points", "bands", 3, "k_points");
            c.at_least(b, "cutoff_cells", "bands", 2, "cutoff_cells");
        }
    }

    if (doc.contains("zak")) {
        const auto& z = doc.at("zak");
        if (c.object(z, "zak", {"band_group", "n_k", "cutoff_cells", "biorthogonal"})) {
            if (auto g = c.string(z, "band_group", "zak"); g && *g != "lower" && *g != "upper" && *g != "both" && *g != "all")
                c.errors.push_back("zak.band_group: must be lower, upper, both or all");
            c.at_least(z, "n_k", "zak", 50, "n_k");
            c.at_least(z, "cutoff_cells", "zak", 2, "cutoff_cells");
            c.boolean(z, "biorthogonal", "zak");
        }
    }

    if (doc.contains("field")) {
        const auto& f = doc.at("field");
        if (c.object(f, "field", {"times", "plane", "normalize"})) {
            c.number_list(f, "times", "field", true);
            if (f.contains("plane")) check_plane(c, f.at("plane"), "field.plane");
            c.boolean(f, "normalize", "field");
        }
    }

    c.string(doc, "output_dir", "config");
    return c.errors;
}

RunConfig parse_config(const json& doc) {
    const auto errors = validate(doc);
    if (!errors.empty()) {
        std::string msg = "invalid configuration:";
        for (const auto& e : errors) msg += "\n  " + e;
        throw ValidationError(msg);
    }
    RunConfig cfg;
    cfg.mode = *mode_from_string(doc.at("mode").get<std::string>());
    const auto& g = doc.at("geometry");
    if (g.contains("helix")) cfg.geometry.helix = helix_from_json(g.at("helix"));
    if (g.contains("file")) cfg.geometry.file = g.at("file").get<std::string>();

    if (doc.contains("initial_state")) {
        const auto& s = doc.at("initial_state");
        if (s.contains("site")) {
            const auto& site = s.at("site");
            if (site.is_string()) {
                cfg.initial_state.site.kind =
                    site.get<std::string>() == "top" ? SiteSpec::Kind::Top : SiteSpec::Kind::Bottom;
            } else {
                cfg.initial_state.site.kind = SiteSpec::Kind::Index;
                cfg.initial_state.site.index = site.get<int>();
            }
        }
        cfg.initial_state.p_up = s.value("p_up", cfg.initial_state.p_up);
    }
    cfg.hermitian_only = doc.value("hermitian_only", false);

    if (doc.contains("time_grid")) {
        const auto& t = doc.at("time_grid");
        cfg.time_grid.t_max = t.value("t_max", cfg.time_grid.t_max);
        cfg.time_grid.points = t.value("points", cfg.time_grid.points);
        cfg.time_grid.tau = t.value("tau", cfg.time_grid.tau);
        if (t.contains("snapshots")) cfg.time_grid.snapshots = t.at("snapshots").get<std::vector<double>>();
    }
    if (doc.contains("helicity")) {
        const auto& h = doc.at("helicity");
        cfg.helicity.dead_band = h.value("dead_band", cfg.helicity.dead_band);
        cfg.helicity.window = h.value("window", cfg.helicity.window);
    }
    if (doc.contains("bands")) {
        const auto& b = doc.at("bands");
        cfg.bands.k_points = b.value("k_points", cfg.bands.k_points);
        cfg.bands.cutoff_cells = b.value("cutoff_cells", cfg.bands.cutoff_cells);
    }
    if (doc.contains("zak")) {
        const auto& z = doc.at("zak");
        cfg.zak.band_group = z.value("band_group", cfg.zak.band_group);
        cfg.zak.n_k = z.value("n_k", cfg.zak.n_k);
        cfg.zak.cutoff_cells = z.value("cutoff_cells", cfg.zak.cutoff_cells);
        cfg.zak.biorthogonal = z.value("biorthogonal", cfg.zak.biorthogonal);
    }
    if (doc.contains("field")) {
        const auto& f = doc.at("field");
        if (f.contains("times")) cfg.field.times = f.at("times").get<std::vector<double>>();
        if (f.contains("plane") && !f.at("plane").is_null()) cfg.field.plane = plane_from_json(f.at("plane"));
        cfg.field.normalize = f.value("normalize", cfg.field.normalize);
    }
    cfg.output_dir = doc.value("output_dir", cfg.output_dir);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ValidationError("config file " + path + ": " + e.what());
    }
    return parse_config(doc);
}

json to_json(const HelixParams& p) {
    return {{"radius", p.radius},
            {"pitch", p.pitch},
            {"sites_per_turn", p.sites_per_turn},
            {"turns", p.turns},
            {"handedness", p.handedness == Handedness::Left ? "left" : "right"}};
}

json to_json(const FieldPlane& p) {
    return {{"normal", axis_name(p.normal)}, {"offset", p.offset}, {"u_center", p.u_center}, {"u_half", p.u_half},
            {"v_center", p.v_center},       {"v_half", p.v_half},  {"nu", p.nu},             {"nv", p.nv}};
}

json to_json(const RunConfig& c) {
    json doc;
    doc["mode"] = to_string(c.mode);
    json geom = json::object();
    if (c.geometry.helix) geom["helix"] = to_json(*c.geometry.helix);
    if (c.geometry.file) geom["file"] = *c.geometry.file;
    doc["geometry"] = geom;
    json site;
    switch (c.initial_state.site.kind) {
        case SiteSpec::Kind::Bottom: site = "bottom"; break;
        case SiteSpec::Kind::Top: site = "top"; break;
        case SiteSpec::Kind::Index: site = c.initial_state.site.index; break;
    }
    doc["initial_state"] = {{"site", site}, {"p_up", c.initial_state.p_up}};
    doc["hermitian_only"] = c.hermitian_only;
    doc["time_grid"] = {{"t_max", c.time_grid.t_max},
                        {"points", c.time_grid.points},
                        {"tau", c.time_grid.tau},
                        {"snapshots", c.time_grid.snapshots}};
    doc["helicity"] = {{"dead_band", c.helicity.dead_band}, {"window", c.helicity.window}};
    doc["bands"] = {{"k_points", c.bands.k_points}, {"cutoff_cells", c.bands.cutoff_cells}};
    doc["zak"] = {{"band_group", c.zak.band_group},
                  {"n_k", c.zak.n_k},
                  {"cutoff_cells", c.zak.cutoff_cells},
                  {"biorthogonal", c.zak.biorthogonal}};
    doc["field"] = {{"times", c.field.times},
                    {"plane", c.field.plane ? to_json(*c.field.plane) : json(nullptr)},
                    {"normalize", c.field.normalize}};
    doc["output_dir"] = c.output_dir;
    return doc;
}

}  // namespace chiral
