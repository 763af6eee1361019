#include "chiral/output.hpp"

#include "chiral/config.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>

namespace chiral {

namespace {

std::ofstream open_csv(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path.string());
    out.precision(std::numeric_limits<double>::max_digits10);
    return out;
}

const char* axis_label(int axis) { return axis == 0 ? "x" : axis == 1 ? "y" : "z"; }

}  // namespace

void write_timeseries_csv(const std::filesystem::path& path, const ObservableSeries& s) {
    auto out = open_csv(path);
    out << "t,trace,P_up,P_down,Sz,z_com,eta\n";
    for (std::size_t i = 0; i < s.times.size(); ++i) {
        const int eta = i < s.eta.size() ? static_cast<int>(s.eta[i]) : 0;
        out << s.times[i] << ',' << s.trace[i] << ',' << s.p_up[i] << ',' << s.p_down[i] << ',' << s.sz[i] << ','
            << s.z_com[i] << ',' << eta << '\n';
    }
}

void write_snapshot_csv(const std::filesystem::path& path, const Observables& obs, std::span<const double> site_z) {
    auto out = open_csv(path);
    out << "site,z,p_up,p_down\n";
    for (std::size_t i = 0; i < obs.site_up.size(); ++i)
        out << i << ',' << site_z[i] << ',' << obs.site_up[i] << ',' << obs.site_down[i] << '\n';
}

void write_bands_csv(const std::filesystem::path& path, const BandStructure& bands) {
    auto out = open_csv(path);
    out << "k,band,energy,gamma,sz,v,in_light_cone\n";
    for (std::size_t i = 0; i < bands.k.size(); ++i) {
        for (int n = 0; n < bands.bands(); ++n) {
            const auto& m = bands.modes[i][n];
            out << bands.k[i] << ',' << n << ',' << m.energy << ',' << m.gamma << ',' << m.sz << ',' << m.velocity
                << ',' << (m.in_light_cone ? 1 : 0) << '\n';
        }
    }
}

void write_field_csv(const std::filesystem::path& path, const IntensityMap& map) {
    auto out = open_csv(path);
    const int n = static_cast<int>(map.plane.normal);
    out << axis_label((n + 1) % 3) << ',' << axis_label((n + 2) % 3) << ",intensity\n";
    for (int j = 0; j < map.plane.nv; ++j) {
        for (int i = 0; i < map.plane.nu; ++i) {
            out << map.plane.u(i) << ',' << map.plane.v(j) << ',';
            const double v = map.at(i, j);
            if (std::isnan(v))
                out << "nan";
            else
                out << v;
            out << '\n';
        }
    }
}

nlohmann::json zak_record(const ZakResult& r) {
    auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
    return {{"n_sites_per_turn", r.sites_per_turn},
            {"band_group", to_string(r.group)},
            {"n_k", r.n_k},
            {"zak_phase", num(r.phase)},
            {"residual", num(r.residual)},
            {"gap_width", r.gap_width},
            {"selection", r.selection},
            {"bands", r.bands},
            {"min_overlap_det", num(r.min_overlap)},
            {"well_defined", r.well_defined}};
}

nlohmann::json field_metadata(const IntensityMap& map) {
    return {{"plane", to_json(map.plane)},
            {"time", map.time},
            {"polarization", to_string(map.spin)},
            {"normalization_max", map.max},
            {"normalized", map.normalized}};
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

std::string format_number(double x) {
    std::ostringstream s;
    s << x;
    return s.str();
}

std::string fnv1a64_hex(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream s;
    s << std::hex;
    s.width(16);
    s.fill('0');
    s << h;
    return s.str();
}

}  // namespace chiral
