#ifndef CHIRAL_GEOMETRY_HPP
#define CHIRAL_GEOMETRY_HPP

#include "chiral/types.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace chiral {

// +1 is a left-handed screw (azimuth decreases as z increases), -1 right-handed.
enum class Handedness : int { Left = 1, Right = -1 };

inline constexpr int xi(Handedness h) { return static_cast<int>(h); }
inline constexpr Handedness opposite(Handedness h) {
    return h == Handedness::Left ? Handedness::Right : Handedness::Left;
}

/// Helix of radius `radius` and pitch `pitch` (both in units of the
/// wavelength) with `sites_per_turn` emitters per 2*pi turn and `turns` turns.
struct HelixParams {
    double radius = 0.05;
    double pitch = 0.175;
    int sites_per_turn = 3;
    int turns = 20;
    Handedness handedness = Handedness::Left;

    int size() const { return sites_per_turn * turns; }
    double spacing() const { return pitch / sites_per_turn; }

    // Every violated constraint, in a stable order. Empty when valid.
    std::vector<std::string> validation_errors() const;
    void validate() const;

    bool operator==(const HelixParams&) const = default;
};

struct EmitterGeometry {
    std::vector<Vec3> positions;
    std::string label;
    std::optional<HelixParams> source;

    std::size_t size() const { return positions.size(); }
    std::vector<double> z_coordinates() const;
};

/// Site n sits at (r0 cos phi_n, -xi r0 sin phi_n, n a / N) with phi_n = 2 pi n / N.
EmitterGeometry build_helix(const HelixParams& params);

// Reflection y -> -y; a helix maps onto the helix of opposite handedness.
EmitterGeometry mirror_z_plane(const EmitterGeometry& geom);

EmitterGeometry rotate_about_z(const EmitterGeometry& geom, double angle);

// Builds a geometry from an arbitrary point set; rejects coincident sites.
EmitterGeometry make_geometry(std::vector<Vec3> positions, std::string label);

// Throws ValidationError naming the first pair of coincident sites.
void check_distinct(const std::vector<Vec3>& positions);

// JSON file {"positions": [[x,y,z],...], "label": string}.
EmitterGeometry load_geometry_file(const std::filesystem::path& path);
void save_geometry_file(const EmitterGeometry& geom, const std::filesystem::path& path);

}  // namespace chiral

#endif
