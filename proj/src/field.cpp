#include "chiral/field.hpp"

#include "chiral/greens.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chiral {

double FieldPlane::u(int i) const {
    return nu == 1 ? u_center : u_center + u_half * static_cast<double>(2 * i - (nu - 1)) / (nu - 1);
}

double FieldPlane::v(int j) const {
    return nv == 1 ? v_center : v_center + v_half * static_cast<double>(2 * j - (nv - 1)) / (nv - 1);
}

Vec3 FieldPlane::point(int i, int j) const {
    const int n = static_cast<int>(normal);
    Vec3 p;
    p(n) = offset;
    p((n + 1) % 3) = u(i);
    p((n + 2) % 3) = v(j);
    return p;
}

std::vector<std::string> FieldPlane::validation_errors() const {
    std::vector<std::string> errors;
    if (nu < 1 || nv < 1) errors.emplace_back("field grid needs at least one point per direction");
    if (!(u_half >= 0.0) || !(v_half >= 0.0)) errors.emplace_back("field grid half-widths must be non-negative");
    if (!std::isfinite(offset) || !std::isfinite(u_center) || !std::isfinite(v_center))
        errors.emplace_back("field plane coordinates must be finite");
    return errors;
}

FieldPlane default_plane(const EmitterGeometry& geom, double radius) {
    double zmin = std::numeric_limits<double>::infinity();
    double zmax = -zmin;
    for (const auto& p : geom.positions) {
        zmin = std::min(zmin, p.z());
        zmax = std::max(zmax, p.z());
    }
    FieldPlane plane;
    plane.normal = Axis::X;
    plane.offset = 10.0 * radius;
    plane.u_center = 0.0;
    plane.u_half = 3.0 * radius;
    plane.v_center = 0.5 * (zmin + zmax);
    plane.v_half = 0.6 * (zmax - zmin);
    plane.nu = 101;
    plane.nv = 201;
    return plane;
}

double field_prefactor() { return std::sqrt(6.0 * kPi * kPi * kGamma0 / kWavelength); }

std::optional<CVec3> field_amplitude(const EmitterGeometry& geom, const CVec& amplitudes, const Vec3& r, Spin s) {
    if (amplitudes.size() != static_cast<Eigen::Index>(2 * geom.size()))
        throw ValidationError("amplitude vector does not match the geometry");
    const CVec3 eps = PolarizationBasis::vector(s);
    CVec3 f = CVec3::Zero();
    for (std::size_t j = 0; j < geom.size(); ++j) {
        const Vec3 d = r - geom.positions[j];
        if (d.norm() < kMaskRadius) return std::nullopt;
        const cplx a = amplitudes(basis_index(static_cast<Eigen::Index>(j), s));
        if (a == cplx(0.0)) continue;
        f += green_tensor(d) * eps * a;
    }
    return f * field_prefactor();
}

namespace {

std::array<IntensityMap, 2> blank_maps(const ExcitationState& state, const FieldPlane& plane) {
    auto errors = plane.validation_errors();
    if (!errors.empty()) throw ValidationError(errors.front());
    std::array<IntensityMap, 2> maps;
    for (Spin s : {Spin::Up, Spin::Down}) {
        auto& m = maps[static_cast<int>(s)];
        m.time = state.time;
        m.spin = s;
        m.plane = plane;
        m.values.assign(plane.size(), 0.0);
    }
    return maps;
}

void fill_point(const EmitterGeometry& geom, const ExcitationState& state, const FieldPlane& plane,
                std::size_t idx, std::array<IntensityMap, 2>& maps) {
    const int i = static_cast<int>(idx % static_cast<std::size_t>(plane.nu));
    const int j = static_cast<int>(idx / static_cast<std::size_t>(plane.nu));
    const Vec3 r = plane.point(i, j);
    const std::size_t nb = state.branches.size();
    const CVec3 eps[2] = {PolarizationBasis::up(), PolarizationBasis::down()};
    // One Green's tensor per emitter, shared by every branch and polarization.
    std::vector<CVec3> fields(2 * nb, CVec3::Zero());
    for (std::size_t e = 0; e < geom.size(); ++e) {
        const Vec3 d = r - geom.positions[e];
        if (d.norm() < kMaskRadius) {
            for (auto& m : maps) m.values[idx] = std::numeric_limits<double>::quiet_NaN();
            return;
        }
        const Tensor3 g = green_tensor(d);
        for (int s = 0; s < 2; ++s) {
            const CVec3 ge = g * eps[s];
            for (std::size_t b = 0; b < nb; ++b) {
                const cplx a = state.branches[b].amplitudes(basis_index(static_cast<Eigen::Index>(e), Spin(s)));
                if (a != cplx(0.0)) fields[2 * b + s] += ge * a;
            }
        }
    }
    const double c2 = field_prefactor() * field_prefactor();
    for (int s = 0; s < 2; ++s) {
        double total = 0.0;
        for (std::size_t b = 0; b < nb; ++b) total += state.branches[b].weight * c2 * fields[2 * b + s].squaredNorm();
        maps[s].values[idx] = total;
    }
}

void check_dims(const EmitterGeometry& geom, const ExcitationState& state) {
    for (const auto& b : state.branches)
        if (b.amplitudes.size() != static_cast<Eigen::Index>(2 * geom.size()))
            throw ValidationError("state does not match the geometry");
}

void finish(std::array<IntensityMap, 2>& maps, bool normalize) {
    for (auto& m : maps) {
        m.max = 0.0;
        for (double v : m.values)
            if (!std::isnan(v)) m.max = std::max(m.max, v);
        if (normalize && m.max > 0.0) {
            for (double& v : m.values) v /= m.max;
            m.normalized = true;
        }
    }
}

}  // namespace

std::array<IntensityMap, 2> intensity_map(const EmitterGeometry& geom, const ExcitationState& state,
                                          const FieldPlane& plane, bool normalize) {
    auto maps = blank_maps(state, plane);
    check_dims(geom, state);
    const auto n = static_cast<long>(plane.size());
#pragma omp parallel for schedule(static)
    for (long idx = 0; idx < n; ++idx) fill_point(geom, state, plane, static_cast<std::size_t>(idx), maps);
    finish(maps, normalize);
    return maps;
}

std::array<IntensityMap, 2> intensity_map_serial(const EmitterGeometry& geom, const ExcitationState& state,
                                                 const FieldPlane& plane, bool normalize) {
    auto maps = blank_maps(state, plane);
    check_dims(geom, state);
    for (std::size_t idx = 0; idx < plane.size(); ++idx) fill_point(geom, state, plane, idx, maps);
    finish(maps, normalize);
    return maps;
}

std::vector<std::array<IntensityMap, 2>> intensity_maps(const EmitterGeometry& geom, const ExcitationState& initial,
                                                        const Propagator& prop, const FieldPlane& plane,
                                                        const std::vector<double>& times, bool normalize) {
    std::vector<std::array<IntensityMap, 2>> out;
    for (const auto& s : prop.evolve_states(initial, times)) out.push_back(intensity_map(geom, s, plane, normalize));
    return out;
}

double intensity_centroid_v(const IntensityMap& map) { return intensity_centroid_v(map, map); }

double intensity_centroid_v(const IntensityMap& a, const IntensityMap& b) {
    double w = 0.0, wv = 0.0;
    for (int j = 0; j < a.plane.nv; ++j) {
        for (int i = 0; i < a.plane.nu; ++i) {
            double val = a.at(i, j) + (&a == &b ? 0.0 : b.at(i, j));
            if (std::isnan(val)) continue;
            w += val;
            wv += val * a.plane.v(j);
        }
    }
    return w > 0.0 ? wv / w : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace chiral
