#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "umbra/foreign.hpp"
#include "umbra/olat.hpp"

namespace umbra {

/// Value of one `key = value` line: bool, unsigned integer, float, quoted
/// string, or a numeric array.
using ConfigValue =
    std::variant<bool, std::uint64_t, double, std::string, std::vector<double>>;

/// Flat TOML-like document: `key = value` lines, `#` comments, no sections.
std::map<std::string, ConfigValue> parse_config_text(const std::string& text);
std::map<std::string, ConfigValue> parse_config_file(const std::filesystem::path& path);

/// Resolved run configuration. Field defaults match the synthesis model's
/// published parameters; everything is overridable from the config file
/// and the command line.
struct PipelineConfig {
    std::uint64_t master_seed = 0;
    int sample_count = 1;
    std::filesystem::path output_root = "out";
    int workers = 1;
    double failure_rate_threshold = 0.01;

    // Corpora.
    std::filesystem::path faces_dir;
    std::filesystem::path silhouettes_dir;
    std::filesystem::path landmarks_dir;
    std::filesystem::path images_dir;  // inputs for mirror generation

    // Light rig and scans; "synthetic" selects the built-in generators.
    std::string rig = "synthetic";
    std::string scan = "synthetic";
    int synthetic_light_count = 304;
    int synthetic_inactive_count = 20;
    int synthetic_scan_resolution = 64;

    // Foreign-shadow synthesis.
    AblationFlags ablation;
    ForeignParams foreign;

    // Facial pairs.
    FacialPairParams facial;

    // Symmetry.
    int k_sigma = 4;

    /// Parse + apply a config file over the defaults. Unknown keys are
    /// ConfigErrors so typos never silently fall back to defaults.
    static PipelineConfig from_file(const std::filesystem::path& path);
    static PipelineConfig from_values(const std::map<std::string, ConfigValue>& values);

    /// Throws ConfigError for out-of-range parameters.
    void validate_common() const;
};

}  // namespace umbra
