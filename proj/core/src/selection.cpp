#include "ssu/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "ssu/csv.hpp"
#include "ssu/earth.hpp"

namespace ssu {

void SelectionConfig::validate() const {
    if (!(v_ground_kms > 0.0 && v_ground_kms < v_ground_max_kms)) {
        throw ConfigError("selection requires 0 < v_ground < v_ground_max");
    }
    if (!(search_radius_km > 0.0)) throw ConfigError("selection.search_radius_km must be positive");
    if (v_critical_kms && !(*v_critical_kms > 0.0)) throw ConfigError("selection.v_critical_kms must be positive");
    if (!(outside_disconnect_speed_kms >= 0.0)) throw ConfigError("selection.outside_disconnect_speed_kms must be >= 0");
    ssdb.validate();
}

double cfo_edge_speed_kms(const RadioConfig& radio) {
    return 0.5 * radio.subcarrier_spacing_hz * kSpeedOfLightMps / radio.carrier_freq_hz / 1000.0;
}

double default_v_critical(const SelectionConfig& cfg, const RadioConfig& radio) {
    return cfg.v_ground_kms + cfo_edge_speed_kms(radio);
}

double SelectionConfig::v_critical(const RadioConfig& radio) const {
    return v_critical_kms ? *v_critical_kms : default_v_critical(*this, radio);
}

const char* to_string(SelectionRule r) {
    switch (r) {
        case SelectionRule::MinDistanceUnderVmax: return "MinDistanceUnderVmax";
        case SelectionRule::MinVelocityAllCritical: return "MinVelocityAllCritical";
        case SelectionRule::MaxSnrBalance: return "MaxSnrBalance";
        case SelectionRule::OutsideMinVelocity: return "OutsideMinVelocity";
        case SelectionRule::Disconnected: return "Disconnected";
        case SelectionRule::Nearest: return "Nearest";
        case SelectionRule::MinVelocityInRadius: return "MinVelocityInRadius";
        case SelectionRule::ClosestToVg: return "ClosestToVg";
    }
    return "?";
}

const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::Dual: return "dual";
        case Strategy::Nearest: return "nearest";
        case Strategy::MinVelocityInRadius: return "min_v_in_radius";
        case Strategy::ClosestToVg: return "vg_only";
    }
    return "?";
}

Strategy parse_strategy(std::string_view name) {
    if (name == "dual") return Strategy::Dual;
    if (name == "nearest") return Strategy::Nearest;
    if (name == "min_v_in_radius") return Strategy::MinVelocityInRadius;
    if (name == "vg_only") return Strategy::ClosestToVg;
    throw ConfigError("unknown strategy '" + std::string(name) + "'");
}

std::optional<double> LinkModel::snr_db(const GeometrySample& g, double compensation_kms) const {
    return link_snr_db(g.distance_km, residual_doppler_speed(g, radio_.doppler_source, compensation_kms), radio_);
}

double doppler_compensation(SsdbRegion region, const SelectionConfig& cfg) {
    return region == SsdbRegion::Inside ? cfg.v_ground_kms : 0.0;
}

namespace {

double compensation_for(SsdbRegion region, const SelectionConfig& cfg, const LinkModel& link) {
    // A line-of-sight Doppler model is taken literally, without compensation.
    if (link.radio().doppler_source == DopplerSource::RangeRate) return 0.0;
    return doppler_compensation(region, cfg);
}

SelectionResult pick(const Candidate& c, SelectionRule rule, SsdbRegion region, const SelectionConfig& cfg,
                     const LinkModel& link) {
    SelectionResult r;
    r.chosen = c.index;
    r.rule = rule;
    r.geometry = c.geometry;
    r.region = region;
    r.snr_db = link.snr_db(c.geometry, compensation_for(region, cfg, link));
    return r;
}

template <class Speed>
SelectionResult three_branch(std::span<const Candidate> cands, Speed speed, const SelectionConfig& cfg,
                             const LinkModel& link) {
    SelectionResult none;
    none.region = SsdbRegion::Inside;
    if (cands.empty()) return none;

    // (a) Some candidate is no faster than the tolerated ground-link speed:
    // the nearest of those. Candidates arrive ordered by distance.
    for (const Candidate& c : cands) {
        if (speed(c) <= cfg.v_ground_max_kms) {
            return pick(c, SelectionRule::MinDistanceUnderVmax, SsdbRegion::Inside, cfg, link);
        }
    }

    // (b) Every candidate exceeds the critical speed: the slowest.
    const double v_crit = cfg.v_critical(link.radio());
    const auto slowest = [&] {
        return std::min_element(cands.begin(), cands.end(),
                                [&](const Candidate& a, const Candidate& b) { return speed(a) < speed(b); });
    };
    if (std::all_of(cands.begin(), cands.end(), [&](const Candidate& c) { return speed(c) > v_crit; })) {
        return pick(*slowest(), SelectionRule::MinVelocityAllCritical, SsdbRegion::Inside, cfg, link);
    }

    // (c) Trade speed against distance through the post-CFO SNR.
    const double comp = compensation_for(SsdbRegion::Inside, cfg, link);
    const Candidate* best = nullptr;
    double best_snr = -std::numeric_limits<double>::infinity();
    for (const Candidate& c : cands) {
        const auto snr = link.snr_db(c.geometry, comp);
        if (snr && (!best || *snr > best_snr)) {
            best = &c;
            best_snr = *snr;
        }
    }
    if (best == nullptr) {
        // Only reachable when every candidate sits exactly on the CFO edge.
        return pick(*slowest(), SelectionRule::MinVelocityAllCritical, SsdbRegion::Inside, cfg, link);
    }
    return pick(*best, SelectionRule::MaxSnrBalance, SsdbRegion::Inside, cfg, link);
}

}  // namespace

SelectionResult select_inside(std::span<const Candidate> candidates, const SelectionConfig& cfg,
                              const LinkModel& link) {
    return three_branch(candidates, [](const Candidate& c) { return c.geometry.relative_speed_kms; }, cfg, link);
}

SelectionResult select_dual(SsdbRegion region, std::span<const Candidate> candidates, const SelectionConfig& cfg,
                            const LinkModel& link) {
    if (region == SsdbRegion::Inside) {
        if (cfg.inside_ranking == InsideRanking::PureRule) return select_inside(candidates, cfg, link);
        const double vg = cfg.v_ground_kms;
        return three_branch(
            candidates, [vg](const Candidate& c) { return vg + std::fabs(c.geometry.relative_speed_kms - vg); }, cfg,
            link);
    }

    SelectionResult r;
    r.region = SsdbRegion::Outside;
    if (candidates.empty()) return r;
    // Slowest, ties to the nearer; candidates are already in distance order.
    const Candidate* best = &candidates.front();
    for (const Candidate& c : candidates) {
        if (c.geometry.relative_speed_kms < best->geometry.relative_speed_kms) best = &c;
    }
    if (best->geometry.relative_speed_kms > cfg.outside_disconnect_speed_kms) {
        r.geometry = best->geometry;
        return r;
    }
    return pick(*best, SelectionRule::OutsideMinVelocity, SsdbRegion::Outside, cfg, link);
}

SelectionResult select(Strategy strategy, const StateVector& user, std::span<const StateVector> relays,
                       std::span<const int> relay_catalog_ids, const SelectionConfig& cfg, const LinkModel& link) {
    const double radius = strategy == Strategy::Nearest ? std::numeric_limits<double>::infinity() : cfg.search_radius_km;
    const std::vector<Candidate> cands = candidates_within(user, relays, radius, relay_catalog_ids);
    const double lat = cands.empty() ? subpoint(user).lat_deg : cands.front().geometry.subpoint_lat_deg;
    const SsdbRegion region = classify_ssdb(lat, cfg.ssdb);

    if (strategy == Strategy::Dual) return select_dual(region, cands, cfg, link);

    SelectionResult none;
    none.region = region;
    if (cands.empty()) return none;
    const Candidate* best = &cands.front();
    SelectionRule rule = SelectionRule::Nearest;
    if (strategy == Strategy::MinVelocityInRadius) {
        rule = SelectionRule::MinVelocityInRadius;
        for (const Candidate& c : cands) {
            if (c.geometry.relative_speed_kms < best->geometry.relative_speed_kms) best = &c;
        }
    } else if (strategy == Strategy::ClosestToVg) {
        rule = SelectionRule::ClosestToVg;
        const auto dev = [&](const Candidate& c) { return std::fabs(c.geometry.relative_speed_kms - cfg.v_ground_kms); };
        for (const Candidate& c : cands) {
            if (dev(c) < dev(*best)) best = &c;
        }
    }
    return pick(*best, rule, region, cfg, link);
}

double SelectionTrace::average_connection_time_s() const {
    if (sessions.empty()) return 0.0;
    double total = 0.0;
    for (const RelaySession& s : sessions) total += s.duration_s;
    return total / static_cast<double>(sessions.size());
}

SelectionTrace selection_trace(const OrbitalElements& user, std::span<const OrbitalElements> relays, UtcTime start,
                               UtcTime end, double step_s, Strategy strategy, const SelectionConfig& cfg,
                               const RadioConfig& radio, GravityModel gravity) {
    if (!(step_s > 0.0)) throw ConfigError("trace step must be positive");
    if (end < start) throw ConfigError("trace window ends before it starts");
    cfg.validate();
    radio.validate();

    const Sgp4 user_prop(user, gravity);
    std::vector<Sgp4> relay_props;
    std::vector<int> ids;
    relay_props.reserve(relays.size());
    for (const OrbitalElements& r : relays) {
        relay_props.emplace_back(r, gravity);
        ids.push_back(r.catalog_id);
    }
    const LinkModel link(radio);

    SelectionTrace trace;
    trace.step_s = step_s;
    std::vector<StateVector> states(relays.size());
    const double span = seconds_between(start, end);
    const auto steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span / step_s - 1e-9)));
    for (std::size_t k = 0; k < steps; ++k) {
        const UtcTime t = add_seconds(start, static_cast<double>(k) * step_s);
        StateVector u;
        try {
            u = user_prop.propagate(t);
            for (std::size_t i = 0; i < relay_props.size(); ++i) states[i] = relay_props[i].propagate(t);
        } catch (const PropagationError& e) {
            throw PropagationError(std::string(e.what()) + " (epoch " + format_utc(t) + ")");
        }
        TraceRow row;
        row.epoch = t;
        row.result = select(strategy, u, states, ids, cfg, link);
        if (row.result.chosen) row.chosen_catalog_id = ids[*row.result.chosen];
        trace.rows.push_back(row);
    }

    for (const TraceRow& row : trace.rows) {
        if (row.chosen_catalog_id < 0) continue;
        const bool extends = !trace.sessions.empty() && trace.sessions.back().catalog_id == row.chosen_catalog_id &&
                             add_seconds(trace.sessions.back().start,
                                         static_cast<double>(trace.sessions.back().steps) * step_s) == row.epoch;
        if (extends) {
            ++trace.sessions.back().steps;
        } else {
            trace.sessions.push_back({row.chosen_catalog_id, row.epoch, 1, 0.0});
        }
        trace.sessions.back().duration_s = static_cast<double>(trace.sessions.back().steps) * step_s;
    }
    return trace;
}

void write_trace_csv(std::ostream& out, const SelectionTrace& trace) {
    out << "epoch,catalog_id,distance_km,relative_speed_kms,range_rate_kms,rule_fired,region\n";
    for (const TraceRow& row : trace.rows) {
        const SelectionResult& r = row.result;
        out << format_utc(row.epoch) << ',';
        if (r.chosen) {
            out << row.chosen_catalog_id << ',' << csv::fixed(r.geometry.distance_km, 6) << ','
                << csv::fixed(r.geometry.relative_speed_kms, 6) << ',' << csv::fixed(r.geometry.range_rate_kms, 6);
        } else {
            out << ",,,";
        }
        out << ',' << to_string(r.rule) << ',' << to_string(r.region) << '\n';
    }
}

}  // namespace ssu
