#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ssu/geometry.hpp"
#include "ssu/link_quality.hpp"
#include "ssu/pop_profiles.hpp"
#include "ssu/scheduler.hpp"
#include "ssu/selection.hpp"
#include "ssu/sgp4.hpp"

namespace ssu {

enum class SelectionMode { Dual, Nearest, MinVelocityInRadius, RandomAmongSelected, VgOnly };

const char* to_string(SelectionMode m);
SelectionMode parse_selection_mode(std::string_view name);

struct GroundStation {
    std::string name;
    double lat_deg = 0.0;
    double lon_deg = 0.0;
    double alt_km = 0.0;
};

struct WaitAndTransferConfig {
    std::vector<GroundStation> stations = default_stations();
    double min_elevation_deg = 25.0;
    double contact_rate_bps = 1.2e9;

    void validate() const;
    static std::vector<GroundStation> default_stations();
};

inline constexpr int kScenarioSchemaVersion = 1;

struct ScenarioConfig {
    std::string name = "scenario";
    double duration_hours = 24.0;
    int session_seconds = 15;
    /// Bits generated per EO satellite per day.
    std::uint64_t generation_rate_bits_per_day = 4'000'000'000'000ULL;
    std::uint64_t initial_backlog_bits = 0;
    /// Unset: the latest epoch among the loaded element sets.
    std::optional<UtcTime> start_epoch;

    std::filesystem::path eo_tles;
    std::filesystem::path relay_tles;
    std::filesystem::path pop_profiles;
    std::filesystem::path weather_trace;  // optional

    int eo_multiplier = 3;
    double availability_fraction = 1.0;
    bool polar_outage = false;
    SelectionMode selection_mode = SelectionMode::Dual;
    Tier tier = Tier::Business;
    double switch_penalty = 0.1;
    PenaltyMode penalty_mode = PenaltyMode::NewLinksOnly;
    int relay_capacity = 32;
    GravityModel gravity = GravityModel::Wgs72;

    SelectionConfig selection;
    RadioConfig radio;
    IslModel isl;

    /// When set the run uses dedicated ground stations instead of relays.
    std::optional<WaitAndTransferConfig> baseline;

    void validate() const;
    std::size_t session_count() const;
};

/// A dotted path into the scenario document and its new value. The value
/// is read as JSON when it parses as JSON and as a string otherwise.
using Override = std::pair<std::string, std::string>;

Override parse_override(std::string_view key_equals_value);

/// Reads a JSON scenario. Relative paths in the file resolve against the
/// file's directory; overridden paths resolve against the working directory.
/// Unknown keys are errors (SchemaViolation); invalid values throw ConfigError.
ScenarioConfig load_scenario(const std::filesystem::path& path, const std::vector<Override>& overrides = {});
ScenarioConfig parse_scenario(std::string_view json_text, const std::filesystem::path& base_dir,
                              const std::vector<Override>& overrides = {});

/// Canonical JSON rendering of a scenario (paths as given).
std::string scenario_to_json(const ScenarioConfig& cfg);

}  // namespace ssu
