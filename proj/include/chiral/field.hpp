#ifndef CHIRAL_FIELD_HPP
#define CHIRAL_FIELD_HPP

#include "chiral/dynamics.hpp"
#include "chiral/geometry.hpp"
#include "chiral/types.hpp"

#include <array>
#include <optional>
#include <vector>

namespace chiral {

enum class Axis : int { X = 0, Y = 1, Z = 2 };

/// Rectangular sampling plane with normal `normal` at coordinate `offset`.
/// In-plane coordinates (u, v) are the two remaining axes in cyclic order
/// after the normal (X -> (y, z), Y -> (z, x), Z -> (x, y)). Samples are
/// placed symmetrically about the centers so mirrored grids coincide exactly.
struct FieldPlane {
    Axis normal = Axis::X;
    double offset = 0.0;
    double u_center = 0.0, u_half = 1.0;
    double v_center = 0.0, v_half = 1.0;
    int nu = 101;
    int nv = 201;

    double u(int i) const;
    double v(int j) const;
    Vec3 point(int i, int j) const;
    std::size_t size() const { return static_cast<std::size_t>(nu) * static_cast<std::size_t>(nv); }
    std::vector<std::string> validation_errors() const;

    bool operator==(const FieldPlane&) const = default;
};

// y-z plane at x = 10 r0, 6 r0 wide in y and 1.2x the emitter z-extent in z.
FieldPlane default_plane(const EmitterGeometry& geom, double radius);

inline constexpr double kMaskRadius = 1e-3;

// sqrt(6 pi^2 Gamma0 / (lambda0 eps0)) with eps0 = 1.
double field_prefactor();

/// Positive-frequency field radiated by spin-sigma amplitudes of one branch:
/// C sum_j G(r - r_j) eps_sigma a_{j sigma}. Empty when r lies within the
/// mask radius of an emitter.
std::optional<CVec3> field_amplitude(const EmitterGeometry& geom, const CVec& amplitudes, const Vec3& r, Spin s);

struct IntensityMap {
    double time = 0.0;
    Spin spin = Spin::Up;
    FieldPlane plane;
    std::vector<double> values;  // index j * nu + i; NaN where masked
    double max = 0.0;            // maximum before any normalization
    bool normalized = false;

    double at(int i, int j) const { return values[static_cast<std::size_t>(j) * plane.nu + i]; }
};

// Intensity sum_b p_b |F_sigma^(b)|^2 for both polarizations.
std::array<IntensityMap, 2> intensity_map(const EmitterGeometry& geom, const ExcitationState& state,
                                          const FieldPlane& plane, bool normalize = false);
std::array<IntensityMap, 2> intensity_map_serial(const EmitterGeometry& geom, const ExcitationState& state,
                                                 const FieldPlane& plane, bool normalize = false);

// Evolves `initial` and returns the maps at each time.
std::vector<std::array<IntensityMap, 2>> intensity_maps(const EmitterGeometry& geom, const ExcitationState& initial,
                                                        const Propagator& prop, const FieldPlane& plane,
                                                        const std::vector<double>& times, bool normalize = false);

// Intensity-weighted mean of the in-plane v coordinate (z for the default plane).
double intensity_centroid_v(const IntensityMap& map);
double intensity_centroid_v(const IntensityMap& a, const IntensityMap& b);

}  // namespace chiral

#endif
