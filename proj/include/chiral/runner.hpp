#ifndef CHIRAL_RUNNER_HPP
#define CHIRAL_RUNNER_HPP

#include "chiral/config.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>

namespace chiral {

inline constexpr const char* kEngineVersion = "1.0.0";

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitNumerical = 2 };

struct RunOptions {
    std::optional<std::string> output_dir;  // overrides config.output_dir
    bool dump_matrices = false;
    std::filesystem::path config_dir;       // base for relative geometry file paths
};

struct RunOutcome {
    int exit_code = kExitOk;
    nlohmann::json manifest;
};

EmitterGeometry resolve_geometry(const RunConfig& config, const std::filesystem::path& base_dir = {});
Eigen::Index resolve_site(const SiteSpec& site, const EmitterGeometry& geom);

// Executes one configuration and writes its outputs plus manifest.json.
RunOutcome run(const RunConfig& config, const RunOptions& options, std::ostream& log);

}  // namespace chiral

#endif
