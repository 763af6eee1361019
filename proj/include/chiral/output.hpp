#ifndef CHIRAL_OUTPUT_HPP
#define CHIRAL_OUTPUT_HPP

#include "chiral/bloch.hpp"
#include "chiral/dynamics.hpp"
#include "chiral/field.hpp"
#include "chiral/topology.hpp"

#include <json.hpp>

#include <filesystem>
#include <span>
#include <string>

namespace chiral {

// Columns t, trace, P_up, P_down, Sz, z_com, eta (eta = 0 when undefined).
void write_timeseries_csv(const std::filesystem::path& path, const ObservableSeries& series);
// Columns site, z, p_up, p_down.
void write_snapshot_csv(const std::filesystem::path& path, const Observables& obs, std::span<const double> site_z);
// Columns k, band, energy, gamma, sz, v, in_light_cone.
void write_bands_csv(const std::filesystem::path& path, const BandStructure& bands);
// Columns <u-axis>, <v-axis>, intensity.
void write_field_csv(const std::filesystem::path& path, const IntensityMap& map);

nlohmann::json zak_record(const ZakResult& result);
nlohmann::json field_metadata(const IntensityMap& map);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

// Compact decimal form used in output file names ("7.9", "1").
std::string format_number(double x);
std::string fnv1a64_hex(const std::string& data);

}  // namespace chiral

#endif
