#include "chiral/geometry.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace chiral {

std::vector<std::string> HelixParams::validation_errors() const {
    std::vector<std::string> errors;
    if (!(radius > 0.0) || !std::isfinite(radius)) errors.emplace_back("radius must be positive");
    if (!(pitch > 0.0) || !std::isfinite(pitch)) errors.emplace_back("pitch must be positive");
    if (sites_per_turn < 1) errors.emplace_back("sites_per_turn must be at least 1");
    if (turns < 1) errors.emplace_back("turns must be at least 1");
    if (handedness != Handedness::Left && handedness != Handedness::Right)
        errors.emplace_back("handedness must be +1 (left) or -1 (right)");
    return errors;
}

void HelixParams::validate() const {
    auto errors = validation_errors();
    if (errors.empty()) return;
    std::string msg = "invalid helix parameters:";
    for (const auto& e : errors) msg += " " + e + ";";
    throw ValidationError(msg);
}

std::vector<double> EmitterGeometry::z_coordinates() const {
    std::vector<double> z(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) z[i] = positions[i].z();
    return z;
}

EmitterGeometry build_helix(const HelixParams& params) {
    params.validate();
    const int n_sites = params.size();
    const double sign = -static_cast<double>(xi(params.handedness));
    EmitterGeometry geom;
    geom.positions.reserve(static_cast<std::size_t>(n_sites));
    for (int n = 0; n < n_sites; ++n) {
        // Reduce the angle index modulo N so equal sublattices get identical coordinates.
        const double phi = 2.0 * kPi * static_cast<double>(n % params.sites_per_turn) / params.sites_per_turn;
        geom.positions.emplace_back(params.radius * std::cos(phi), sign * params.radius * std::sin(phi),
                                    n * params.spacing());
    }
    std::ostringstream label;
    label << (params.handedness == Handedness::Left ? "left" : "right") << "-handed helix r0=" << params.radius
          << " a=" << params.pitch << " N=" << params.sites_per_turn << " M=" << params.turns;
    geom.label = label.str();
    geom.source = params;
    return geom;
}

EmitterGeometry mirror_z_plane(const EmitterGeometry& geom) {
    EmitterGeometry out = geom;
    for (auto& p : out.positions) p.y() = -p.y();
    if (out.source) {
        out.source->handedness = opposite(out.source->handedness);
        out.label = build_helix(*out.source).label;
    } else {
        out.label = geom.label + " (mirrored)";
    }
    return out;
}

EmitterGeometry rotate_about_z(const EmitterGeometry& geom, double angle) {
    EmitterGeometry out = geom;
    const Eigen::Matrix3d rot = Eigen::AngleAxisd(angle, Vec3::UnitZ()).toRotationMatrix();
    for (auto& p : out.positions) p = rot * p;
    // A rotated helix no longer starts at phi = 0.
    out.source.reset();
    return out;
}

void check_distinct(const std::vector<Vec3>& positions) {
    for (std::size_t i = 0; i < positions.size(); ++i) {
        for (std::size_t j = i + 1; j < positions.size(); ++j) {
            if ((positions[i] - positions[j]).norm() == 0.0) {
                std::ostringstream msg;
                msg << "coincident emitters at indices " << i << " and " << j;
                throw ValidationError(msg.str());
            }
        }
    }
}

EmitterGeometry make_geometry(std::vector<Vec3> positions, std::string label) {
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (!positions[i].allFinite())
            throw ValidationError("non-finite coordinate at index " + std::to_string(i));
    }
    check_distinct(positions);
    return EmitterGeometry{std::move(positions), std::move(label), std::nullopt};
}

EmitterGeometry load_geometry_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open geometry file " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("geometry file " + path.string() + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("positions"))
        throw ValidationError("geometry file must be an object with a \"positions\" array");
    for (const auto& [key, _] : doc.items()) {
        if (key != "positions" && key != "label")
            throw ValidationError("geometry file: unknown key \"" + key + "\"");
    }
    std::vector<Vec3> positions;
    for (const auto& p : doc.at("positions")) {
        if (!p.is_array() || p.size() != 3 || !p[0].is_number() || !p[1].is_number() || !p[2].is_number())
            throw ValidationError("geometry file: every position must be [x, y, z]");
        positions.emplace_back(p[0].get<double>(), p[1].get<double>(), p[2].get<double>());
    }
    if (positions.empty()) throw ValidationError("geometry file: no positions");
    std::string label = doc.value("label", path.filename().string());
    return make_geometry(std::move(positions), std::move(label));
}

void save_geometry_file(const EmitterGeometry& geom, const std::filesystem::path& path) {
    nlohmann::json doc;
    doc["label"] = geom.label;
    doc["positions"] = nlohmann::json::array();
    for (const auto& p : geom.positions) doc["positions"].push_back({p.x(), p.y(), p.z()});
    std::ofstream out(path);
    out << doc.dump(2) << '\n';
}

}  // namespace chiral
