#pragma once

/// \file
/// Engine configuration: the JSON policy file and its validated in-memory
/// form. A loaded config is immutable; reloading builds a new one.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "polycomb/combiner.hpp"
#include "polycomb/lattice.hpp"
#include "polycomb/policy.hpp"

namespace polycomb {

enum class Mode { weighted, ahp_fig1, ahp_fig2 };

std::string_view to_string(Mode mode) noexcept;
std::optional<Mode> parse_mode(std::string_view text) noexcept;

using CombinerParams = std::variant<WeightedConfig, AhpConfigFig1, AhpConfigFig2>;

/// Names of the tunable parameters of a mode, in declaration order.
const std::vector<std::string>& parameter_names(Mode mode);
/// Throws UnknownParameterError if `name` is not a parameter of the params' mode.
double get_parameter(const CombinerParams& params, std::string_view name);
CombinerParams with_parameter(CombinerParams params, std::string_view name, double value);

/// One mandatory + discretionary pair guarding the same property.
struct PolicyBlock {
    SecurityLattice lattice;
    LabelAssignment labels;
    AccessMatrix matrix;
    ClearanceScale mandatory_scale;
    ClearanceScale discretionary_scale;
    Direction direction = Direction::standard;
};

using CellKey = std::pair<std::string, std::string>; // (subject, object)

struct EngineConfig {
    ClearanceScale scale;
    AccessUniverse universe;
    Mode mode = Mode::weighted;
    CombinerParams params;
    PolicyBlock confidentiality;
    std::optional<PolicyBlock> integrity;
    /// Administrator-fixed discretionary clearances, applied in place of the
    /// matrix formula to every discretionary evaluation of the cell.
    std::map<CellKey, double> overrides;
};

struct LoadedConfig {
    EngineConfig config;
    std::string fingerprint; // lowercase hex SHA-256 of the raw bytes
};

/// Throws ParseError for malformed JSON, ModeMismatchError when the combiner
/// parameters do not fit the mode, ValidationError for everything else.
LoadedConfig load_config(std::string_view bytes);

/// As load_config; throws IoError if the file cannot be read.
LoadedConfig load_config_file(const std::filesystem::path& path);

std::string fingerprint(std::string_view bytes);

} // namespace polycomb
