#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ssu/geometry.hpp"
#include "ssu/link_quality.hpp"
#include "ssu/sgp4.hpp"
#include "ssu/tle.hpp"

namespace ssu {

/// How the inside-SSDB ranking is composed with the three-branch rule.
enum class InsideRanking {
    /// Branches compare the effective speed v_G + |v - v_G|, so candidates
    /// whose speed is close to v_G are preferred over slower ones.
    PreferenceMetric,
    /// Branches compare raw relative speed.
    PureRule,
};

struct SelectionConfig {
    double v_ground_kms = 7.4;
    double v_ground_max_kms = 8.5;
    /// Unset: v_ground + the speed whose residual Doppler reaches the
    /// CFO bound's validity edge (see default_v_critical).
    std::optional<double> v_critical_kms;
    double search_radius_km = 968.0;
    double low_velocity_target_kms = 1.5;
    double outside_disconnect_speed_kms = 3.0;
    InsideRanking inside_ranking = InsideRanking::PreferenceMetric;
    SsdbConfig ssdb;

    void validate() const;
    double v_critical(const RadioConfig& radio) const;
};

/// Speed at which the normalized CFO reaches 0.5: 0.5 * df * c / f, km/s.
double cfo_edge_speed_kms(const RadioConfig& radio);
double default_v_critical(const SelectionConfig& cfg, const RadioConfig& radio);

enum class SelectionRule {
    MinDistanceUnderVmax,
    MinVelocityAllCritical,
    MaxSnrBalance,
    OutsideMinVelocity,
    Disconnected,
    // Single-criterion strategies used for comparison.
    Nearest,
    MinVelocityInRadius,
    ClosestToVg,
};

const char* to_string(SelectionRule r);

struct SelectionResult {
    std::optional<std::size_t> chosen;  // index into the relay list
    SelectionRule rule = SelectionRule::Disconnected;
    /// Geometry of the chosen relay. For a Disconnected outside-SSDB user
    /// with candidates in range, the slowest rejected candidate.
    GeometrySample geometry;
    std::optional<double> snr_db;
    SsdbRegion region = SsdbRegion::Inside;
};

/// Evaluates the post-CFO SNR of a candidate link.
class LinkModel {
public:
    explicit LinkModel(RadioConfig radio) : radio_(radio) {}
    std::optional<double> snr_db(const GeometrySample& g, double compensation_kms) const;
    const RadioConfig& radio() const noexcept { return radio_; }

private:
    RadioConfig radio_;
};

/// Three-branch rule over candidates already limited to the search radius
/// and ordered by distance then catalog id.
SelectionResult select_inside(std::span<const Candidate> candidates, const SelectionConfig& cfg,
                              const LinkModel& link);

SelectionResult select_dual(SsdbRegion region, std::span<const Candidate> candidates, const SelectionConfig& cfg,
                            const LinkModel& link);

enum class Strategy { Dual, Nearest, MinVelocityInRadius, ClosestToVg };

const char* to_string(Strategy s);
Strategy parse_strategy(std::string_view name);

/// Runs `strategy` for a user at one instant. Nearest ignores the search
/// radius; the others only consider relays within it.
SelectionResult select(Strategy strategy, const StateVector& user, std::span<const StateVector> relays,
                       std::span<const int> relay_catalog_ids, const SelectionConfig& cfg, const LinkModel& link);

/// Doppler the receiver is assumed to pre-compensate in a region.
double doppler_compensation(SsdbRegion region, const SelectionConfig& cfg);

struct TraceRow {
    UtcTime epoch{};
    SelectionResult result;
    int chosen_catalog_id = -1;
};

/// Consecutive steps on the same relay. A return to a relay after a gap
/// starts a new session.
struct RelaySession {
    int catalog_id = -1;
    UtcTime start{};
    std::size_t steps = 0;
    double duration_s = 0.0;
};

struct SelectionTrace {
    double step_s = 0.0;
    std::vector<TraceRow> rows;
    std::vector<RelaySession> sessions;

    double average_connection_time_s() const;
};

/// Samples [start, end) every `step_s` seconds; an empty window still gets
/// the sample at `start`. Propagation errors are rethrown with the epoch.
SelectionTrace selection_trace(const OrbitalElements& user, std::span<const OrbitalElements> relays, UtcTime start,
                               UtcTime end, double step_s, Strategy strategy, const SelectionConfig& cfg,
                               const RadioConfig& radio, GravityModel gravity = GravityModel::Wgs72);

void write_trace_csv(std::ostream& out, const SelectionTrace& trace);

}  // namespace ssu
