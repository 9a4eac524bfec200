#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "ssu/earth.hpp"
#include "ssu/sim.hpp"

namespace ssu {

std::vector<ContactWindow> contact_windows(const OrbitalElements& sat, const GroundStation& station,
                                           double min_elevation_deg, UtcTime start, UtcTime end, double coarse_step_s,
                                           double tolerance_s, GravityModel gravity) {
    if (!(coarse_step_s > 0.0) || !(tolerance_s > 0.0)) throw ConfigError("contact scan steps must be positive");
    const Sgp4 prop(sat, gravity);
    auto above = [&](UtcTime t) {
        return elevation_deg(station.lat_deg, station.lon_deg, station.alt_km, prop.propagate(t).position, t) >
               min_elevation_deg;
    };
    // Bisect between a time with state `a_state` and one with the opposite state.
    auto edge = [&](UtcTime a, UtcTime b) {
        const bool a_state = above(a);
        while (seconds_between(a, b) > tolerance_s) {
            const UtcTime mid = add_seconds(a, seconds_between(a, b) / 2.0);
            if (above(mid) == a_state) a = mid;
            else b = mid;
        }
        return b;
    };

    std::vector<ContactWindow> out;
    const double span = seconds_between(start, end);
    bool inside = above(start);
    UtcTime open = start;
    UtcTime prev = start;
    for (double s = coarse_step_s;; s += coarse_step_s) {
        const UtcTime t = s >= span ? end : add_seconds(start, s);
        const bool now = above(t);
        if (now != inside) {
            const UtcTime e = edge(prev, t);
            if (now) {
                open = e;
            } else {
                out.push_back({0, open, e});
            }
            inside = now;
        }
        prev = t;
        if (t == end) break;
    }
    if (inside) out.push_back({0, open, end});
    return out;
}

std::vector<BacklogLedger> run_wait_and_transfer(const WaitAndTransferConfig& cfg,
                                                 std::span<const OrbitalElements> fleet,
                                                 std::span<const std::string> user_ids, UtcTime start,
                                                 double duration_hours, int session_seconds,
                                                 std::uint64_t generation_rate_bits_per_day,
                                                 std::uint64_t initial_backlog_bits, std::vector<PlanRow>* plan,
                                                 const SessionObserver& observer, GravityModel gravity) {
    cfg.validate();
    if (session_seconds <= 0) throw ConfigError("session_seconds must be positive");
    if (!user_ids.empty() && user_ids.size() != fleet.size()) throw DimensionMismatch("user id list size differs");
    const std::size_t M = fleet.size();
    const auto T = static_cast<std::uint64_t>(session_seconds);
    const auto sessions = static_cast<std::size_t>(std::floor(duration_hours * 3600.0 / session_seconds + 1e-9));
    const auto per_session = static_cast<std::uint64_t>(std::floor(cfg.contact_rate_bps * session_seconds));

    std::vector<BacklogLedger> led(M);
    std::vector<std::optional<Sgp4>> prop(M);
    for (std::size_t i = 0; i < M; ++i) {
        led[i].user_id = user_ids.empty() ? fleet[i].name : user_ids[i];
        led[i].catalog_id = fleet[i].catalog_id;
        led[i].initial_bits = initial_backlog_bits;
        led[i].backlog_bits = initial_backlog_bits;
        try {
            prop[i].emplace(fleet[i], gravity);
        } catch (const Error&) {
        }
    }
    std::vector<int> prev_station(M, -1);

    for (std::size_t k = 0; k < sessions; ++k) {
        const UtcTime t = start + std::chrono::seconds(static_cast<long long>(k * T));
        const std::uint64_t gen = cumulative_generation_bits(generation_rate_bits_per_day, (k + 1) * T) -
                                  cumulative_generation_bits(generation_rate_bits_per_day, k * T);
        for (std::size_t i = 0; i < M; ++i) {
            BacklogLedger& l = led[i];
            l.generated_bits += gen;
            l.backlog_bits += gen;

            int station = -1;
            if (prop[i]) {
                try {
                    const Vec3 r = prop[i]->propagate(t).position;
                    for (std::size_t s = 0; s < cfg.stations.size() && station < 0; ++s) {
                        const GroundStation& g = cfg.stations[s];
                        if (elevation_deg(g.lat_deg, g.lon_deg, g.alt_km, r, t) > cfg.min_elevation_deg) {
                            station = static_cast<int>(s);
                        }
                    }
                } catch (const PropagationError&) {
                    prop[i].reset();
                }
            }
            if (station < 0) {
                ++l.disconnected_sessions;
                prev_station[i] = -1;
                continue;
            }
            const std::uint64_t delivered = std::min(l.backlog_bits, per_session);
            l.backlog_bits -= delivered;
            l.delivered_bits += delivered;
            ++l.connected_sessions;
            const bool sw = prev_station[i] != station;
            if (sw) ++l.switch_count;
            prev_station[i] = station;
            if (plan) {
                plan->push_back({k, l.user_id, -1 - station, cfg.stations[static_cast<std::size_t>(station)].name,
                                 delivered, delivered, sw});
            }
        }
        for (const BacklogLedger& l : led) {
            if (!l.conserved()) throw Error("backlog ledger of " + l.user_id + " is not conserved");
        }
        if (observer) observer(k, led);
    }
    return led;
}

}  // namespace ssu
