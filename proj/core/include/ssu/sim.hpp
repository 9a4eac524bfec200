#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ssu/scenario.hpp"
#include "ssu/tle.hpp"

namespace ssu {

struct BacklogLedger {
    std::string user_id;
    int catalog_id = 0;
    std::uint64_t initial_bits = 0;
    std::uint64_t generated_bits = 0;
    std::uint64_t delivered_bits = 0;
    std::uint64_t backlog_bits = 0;
    std::size_t connected_sessions = 0;
    std::size_t disconnected_sessions = 0;  // no usable relay or station
    std::size_t unavailable_sessions = 0;   // removed by a perturbation
    std::size_t switch_count = 0;

    /// initial + generated == delivered + backlog.
    bool conserved() const noexcept { return initial_bits + generated_bits == delivered_bits + backlog_bits; }
};

/// One served link in one session.
struct PlanRow {
    std::size_t session_index = 0;
    std::string user_id;
    int relay_id = 0;  // relay catalog id, or -1 - station index for ground contacts
    std::string pop_id;
    std::uint64_t value_bits = 0;      // min(backlog, deliverable)
    std::uint64_t delivered_bits = 0;  // after the switching penalty
    bool was_switch = false;
};

/// Bits generated in the first `elapsed_s` seconds at a steady daily rate,
/// rounded down.
std::uint64_t cumulative_generation_bits(std::uint64_t rate_bits_per_day, std::uint64_t elapsed_s);

/// Linear interpolation between order statistics (h = (n - 1) p).
double quantile(std::vector<double> values, double p);

struct SimulationSummary {
    std::size_t users = 0;
    std::size_t sessions = 0;
    double median_backlog_bits = 0.0;
    double p90_backlog_bits = 0.0;
    std::uint64_t total_generated_bits = 0;
    std::uint64_t total_delivered_bits = 0;
    std::uint64_t total_backlog_bits = 0;
    double delivered_fraction = 0.0;
    std::size_t total_switches = 0;
    std::size_t connected_user_sessions = 0;
    std::size_t disconnected_user_sessions = 0;
    std::size_t unavailable_user_sessions = 0;
    /// Mean length of an uninterrupted user-relay connection, seconds.
    double average_connection_time_s = 0.0;
    /// Sorted end-of-run backlogs with their empirical CDF values.
    std::vector<std::pair<double, double>> backlog_cdf;
};

/// Throws EmptyInput for an empty ledger set.
SimulationSummary summarize(std::span<const BacklogLedger> ledgers, double session_seconds = 0.0,
                            std::span<const double> connection_runs_s = {});

struct RelayUsage {
    int catalog_id = 0;
    double connected_seconds = 0.0;  // summed over concurrent links
    std::size_t links = 0;           // user-sessions served
};

struct SimulationReport {
    ScenarioConfig config;
    std::uint64_t seed = 0;
    UtcTime start{};
    std::vector<BacklogLedger> ledgers;
    std::vector<PlanRow> plan;
    std::vector<RelayUsage> relay_usage;  // relays that served at least one link
    std::vector<double> connection_runs_s;
    std::vector<std::string> quarantined;  // satellites dropped after propagation failures
    SimulationSummary summary;
};

/// Per-session view of the ledgers, for callers that audit a run.
using SessionObserver = std::function<void(std::size_t session_index, std::span<const BacklogLedger> ledgers)>;

struct LoadedScenario {
    std::vector<OrbitalElements> users;  // after the multiplier
    std::vector<std::string> user_ids;
    std::vector<OrbitalElements> relays;
    std::vector<PopProfile> pops;
    WeatherTrace weather;
    UtcTime start{};
};

/// Reads every input a scenario references. Throws IngestError.
LoadedScenario load_inputs(const ScenarioConfig& cfg);

/// Phase-shifted copies: each element set followed by multiplier - 1 twins
/// with mean anomaly offsets +s, -s, +2s, -2s, ... where s = 360 / (multiplier + 1).
std::vector<OrbitalElements> multiply_fleet(std::span<const OrbitalElements> fleet, int multiplier,
                                            std::vector<std::string>* ids = nullptr);

struct Perturbation {
    std::vector<std::uint8_t> available;  // per user
    bool outside_ssdb_disconnected = false;
};

using SimRng = std::mt19937_64;

/// Draws one availability decision per user from `rng`, always consuming
/// exactly one draw per user so runs stay aligned across settings.
Perturbation apply_scenario_perturbation(const ScenarioConfig& cfg, std::size_t session_index, std::size_t users,
                                         SimRng& rng);

SimulationReport run_scenario(const ScenarioConfig& cfg, std::uint64_t seed, const SessionObserver& observer = {});
SimulationReport run_scenario(const ScenarioConfig& cfg, const LoadedScenario& inputs, std::uint64_t seed,
                              const SessionObserver& observer = {});

struct ContactWindow {
    std::size_t station = 0;
    UtcTime start{};
    UtcTime end{};
    double duration_s() const { return seconds_between(start, end); }
};

/// Intervals where the satellite stands above `min_elevation_deg` at a
/// station. Scans at `coarse_step_s` and refines edges to `tolerance_s`.
std::vector<ContactWindow> contact_windows(const OrbitalElements& sat, const GroundStation& station,
                                           double min_elevation_deg, UtcTime start, UtcTime end,
                                           double coarse_step_s = 10.0, double tolerance_s = 0.01,
                                           GravityModel gravity = GravityModel::Wgs72);

/// Ground-station baseline: each session a satellite above the elevation
/// mask at any station drains min(backlog, rate * session) bits.
std::vector<BacklogLedger> run_wait_and_transfer(const WaitAndTransferConfig& cfg,
                                                 std::span<const OrbitalElements> fleet,
                                                 std::span<const std::string> user_ids, UtcTime start,
                                                 double duration_hours, int session_seconds,
                                                 std::uint64_t generation_rate_bits_per_day,
                                                 std::uint64_t initial_backlog_bits = 0,
                                                 std::vector<PlanRow>* plan = nullptr,
                                                 const SessionObserver& observer = {},
                                                 GravityModel gravity = GravityModel::Wgs72);

}  // namespace ssu
