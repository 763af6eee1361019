#ifndef CHIRAL_CONFIG_HPP
#define CHIRAL_CONFIG_HPP

#include "chiral/field.hpp"
#include "chiral/geometry.hpp"
#include "chiral/topology.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace chiral {

enum class Mode { Dynamics, Bands, Zak, Field, Check };

const char* to_string(Mode m);
std::optional<Mode> mode_from_string(const std::string& s);

struct GeometrySpec {
    std::optional<HelixParams> helix;
    std::optional<std::string> file;

    bool operator==(const GeometrySpec&) const = default;
};

struct SiteSpec {
    enum class Kind { Bottom, Top, Index };
    Kind kind = Kind::Bottom;
    int index = 0;

    bool operator==(const SiteSpec&) const = default;
};

struct InitialStateSpec {
    SiteSpec site;
    double p_up = 0.5;

    bool operator==(const InitialStateSpec&) const = default;
};

struct TimeGridSpec {
    double t_max = 15.8;
    int points = 200;
    double tau = 7.9;
    std::vector<double> snapshots;

    bool operator==(const TimeGridSpec&) const = default;
};

struct HelicitySpec {
    double dead_band = 1e-6;
    int window = 1;

    bool operator==(const HelicitySpec&) const = default;
};

struct BandsSpec {
    int k_points = 401;
    int cutoff_cells = 2000;

    bool operator==(const BandsSpec&) const = default;
};

struct ZakSpec {
    std::string band_group = "both";  // lower | upper | both | all
    int n_k = 400;
    int cutoff_cells = 2000;
    bool biorthogonal = false;

    bool operator==(const ZakSpec&) const = default;
};

struct FieldSpec {
    std::vector<double> times{1.0};
    std::optional<FieldPlane> plane;  // default_plane() when absent
    bool normalize = false;

    bool operator==(const FieldSpec&) const = default;
};

/// One run of the engine. JSON keys mirror the field names; unknown keys
/// are rejected everywhere.
struct RunConfig {
    Mode mode = Mode::Dynamics;
    GeometrySpec geometry;
    InitialStateSpec initial_state;
    bool hermitian_only = false;
    TimeGridSpec time_grid;
    HelicitySpec helicity;
    BandsSpec bands;
    ZakSpec zak;
    FieldSpec field;
    std::string output_dir = "out";

    bool operator==(const RunConfig&) const = default;
};

// Every schema and range violation in the document (not fail-fast).
std::vector<std::string> validate(const nlohmann::json& doc);

// Throws ValidationError listing all problems when validate() is non-empty.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

nlohmann::json to_json(const RunConfig& config);
nlohmann::json to_json(const FieldPlane& plane);
nlohmann::json to_json(const HelixParams& params);

}  // namespace chiral

#endif
