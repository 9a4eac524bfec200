#include "ssu/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

#include "ssu/earth.hpp"
#include "ssu/geometry.hpp"

namespace ssu {

double quantile(std::vector<double> v, double p) {
    if (v.empty()) throw EmptyInput("quantile of an empty sample");
    std::sort(v.begin(), v.end());
    const double h = (static_cast<double>(v.size()) - 1.0) * std::clamp(p, 0.0, 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= v.size()) return v.back();
    return v[lo] + (h - static_cast<double>(lo)) * (v[lo + 1] - v[lo]);
}

SimulationSummary summarize(std::span<const BacklogLedger> ledgers, double session_seconds,
                            std::span<const double> connection_runs_s) {
    if (ledgers.empty()) throw EmptyInput("no ledgers to summarize");
    SimulationSummary s;
    s.users = ledgers.size();
    std::vector<double> backlog;
    backlog.reserve(ledgers.size());
    std::uint64_t initial = 0;
    for (const BacklogLedger& l : ledgers) {
        backlog.push_back(static_cast<double>(l.backlog_bits));
        initial += l.initial_bits;
        s.total_generated_bits += l.generated_bits;
        s.total_delivered_bits += l.delivered_bits;
        s.total_backlog_bits += l.backlog_bits;
        s.total_switches += l.switch_count;
        s.connected_user_sessions += l.connected_sessions;
        s.disconnected_user_sessions += l.disconnected_sessions;
        s.unavailable_user_sessions += l.unavailable_sessions;
    }
    s.sessions = ledgers.front().connected_sessions + ledgers.front().disconnected_sessions +
                 ledgers.front().unavailable_sessions;
    s.median_backlog_bits = quantile(backlog, 0.5);
    s.p90_backlog_bits = quantile(backlog, 0.9);
    const std::uint64_t offered = initial + s.total_generated_bits;
    s.delivered_fraction =
        offered == 0 ? 0.0 : static_cast<double>(s.total_delivered_bits) / static_cast<double>(offered);
    if (!connection_runs_s.empty()) {
        double total = 0.0;
        for (double r : connection_runs_s) total += r;
        s.average_connection_time_s = total / static_cast<double>(connection_runs_s.size());
    }
    (void)session_seconds;
    std::sort(backlog.begin(), backlog.end());
    for (std::size_t i = 0; i < backlog.size(); ++i) {
        s.backlog_cdf.emplace_back(backlog[i], static_cast<double>(i + 1) / static_cast<double>(backlog.size()));
    }
    return s;
}

std::vector<OrbitalElements> multiply_fleet(std::span<const OrbitalElements> fleet, int multiplier,
                                            std::vector<std::string>* ids) {
    if (multiplier < 1) throw ConfigError("fleet multiplier must be >= 1");
    std::vector<OrbitalElements> out;
    if (ids) ids->clear();
    const double step = 360.0 / (multiplier + 1);
    for (const OrbitalElements& el : fleet) {
        out.push_back(el);
        if (ids) ids->push_back(el.name);
        for (int k = 1; k < multiplier; ++k) {
            const int magnitude = (k + 1) / 2;
            const double offset = (k % 2 == 1 ? 1.0 : -1.0) * magnitude * step;
            OrbitalElements twin = el;
            twin.mean_anomaly_deg = std::fmod(el.mean_anomaly_deg + offset + 360.0, 360.0);
            twin.name = el.name + "/" + std::to_string(k);
            out.push_back(twin);
            if (ids) ids->push_back(twin.name);
        }
    }
    return out;
}

LoadedScenario load_inputs(const ScenarioConfig& cfg) {
    cfg.validate();
    LoadedScenario in;
    const std::vector<OrbitalElements> fleet = load_tle_file(cfg.eo_tles);
    if (fleet.empty()) throw IngestError("EO element file " + cfg.eo_tles.string() + " has no records");
    in.users = multiply_fleet(fleet, cfg.eo_multiplier, &in.user_ids);
    if (!cfg.baseline) {
        in.relays = load_tle_file(cfg.relay_tles);
        in.pops = load_pop_profiles(cfg.pop_profiles);
        if (in.pops.empty()) throw IngestError("PoP profile file " + cfg.pop_profiles.string() + " has no PoPs");
        for (const PopProfile& p : in.pops) {
            if (!p.tier_rates_bps.contains(cfg.tier)) {
                throw SchemaViolation(cfg.pop_profiles.string(),
                                      "PoP '" + p.pop_id + "' has no rate for tier " + to_string(cfg.tier));
            }
        }
    }
    if (!cfg.weather_trace.empty()) in.weather = WeatherTrace::load(cfg.weather_trace);
    if (cfg.start_epoch) {
        in.start = *cfg.start_epoch;
    } else {
        in.start = fleet.front().epoch;
        for (const auto& e : fleet) in.start = std::max(in.start, e.epoch);
        for (const auto& e : in.relays) in.start = std::max(in.start, e.epoch);
    }
    return in;
}

Perturbation apply_scenario_perturbation(const ScenarioConfig& cfg, std::size_t session_index, std::size_t users,
                                         SimRng& rng) {
    (void)session_index;
    Perturbation p;
    p.available.assign(users, 1);
    p.outside_ssdb_disconnected = cfg.polar_outage;
    for (std::size_t i = 0; i < users; ++i) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        p.available[i] = u < cfg.availability_fraction ? 1 : 0;
    }
    return p;
}

std::uint64_t cumulative_generation_bits(std::uint64_t rate, std::uint64_t elapsed_s) {
    if (rate == 0 || elapsed_s == 0) return 0;
    if (rate <= std::numeric_limits<std::uint64_t>::max() / elapsed_s) return rate * elapsed_s / 86400;
    const std::uint64_t days = elapsed_s / 86400;
    const std::uint64_t rest = elapsed_s % 86400;
    return rate * days + static_cast<std::uint64_t>(std::floor(static_cast<long double>(rate) * rest / 86400.0L));
}

namespace {

void check_conservation(std::span<const BacklogLedger> ledgers) {
    for (const BacklogLedger& l : ledgers) {
        if (!l.conserved()) throw Error("backlog ledger of " + l.user_id + " is not conserved");
    }
}

struct RelayRoute {
    bool computed = false;
    RouteChoice route;
};

}  // namespace

SimulationReport run_scenario(const ScenarioConfig& cfg, std::uint64_t seed, const SessionObserver& observer) {
    return run_scenario(cfg, load_inputs(cfg), seed, observer);
}

SimulationReport run_scenario(const ScenarioConfig& cfg, const LoadedScenario& in, std::uint64_t seed,
                              const SessionObserver& observer) {
    cfg.validate();
    SimulationReport rep;
    rep.config = cfg;
    rep.seed = seed;
    rep.start = in.start;
    const std::size_t sessions = cfg.session_count();
    const auto T = static_cast<std::uint64_t>(cfg.session_seconds);

    if (cfg.baseline) {
        rep.ledgers = run_wait_and_transfer(*cfg.baseline, in.users, in.user_ids, in.start, cfg.duration_hours,
                                            cfg.session_seconds, cfg.generation_rate_bits_per_day,
                                            cfg.initial_backlog_bits, &rep.plan, observer, cfg.gravity);
        rep.summary = summarize(rep.ledgers, cfg.session_seconds);
        return rep;
    }

    const std::size_t M = in.users.size();
    const std::size_t N = in.relays.size();

    std::vector<BacklogLedger> led(M);
    for (std::size_t i = 0; i < M; ++i) {
        led[i].user_id = in.user_ids[i];
        led[i].catalog_id = in.users[i].catalog_id;
        led[i].initial_bits = cfg.initial_backlog_bits;
        led[i].backlog_bits = cfg.initial_backlog_bits;
    }

    std::vector<std::optional<Sgp4>> user_prop(M), relay_prop(N);
    auto quarantine = [&](const std::string& who, const std::string& why) {
        rep.quarantined.push_back(who + ": " + why);
    };
    for (std::size_t i = 0; i < M; ++i) {
        try {
            user_prop[i].emplace(in.users[i], cfg.gravity);
        } catch (const Error& e) {
            quarantine(in.user_ids[i], e.what());
        }
    }
    for (std::size_t j = 0; j < N; ++j) {
        try {
            relay_prop[j].emplace(in.relays[j], cfg.gravity);
        } catch (const Error& e) {
            quarantine(in.relays[j].name, e.what());
        }
    }

    const LinkModel link(cfg.radio);
    SimRng perturb_rng(seed);
    SimRng pick_rng(seed ^ 0x9E3779B97F4A7C15ULL);

    std::vector<int> prev_relay(M, -1);  // catalog id held last session
    std::vector<std::size_t> run_len(M, 0);
    std::map<int, RelayUsage> usage;
    const double b = cfg.switch_penalty;

    std::vector<StateVector> user_state(M);
    std::vector<StateVector> active_states;
    std::vector<int> active_ids;
    std::vector<std::size_t> active_relay;  // active slot -> relay index
    active_states.reserve(N);

    for (std::size_t k = 0; k < sessions; ++k) {
        const UtcTime t = in.start + std::chrono::seconds(static_cast<long long>(k * T));

        const std::uint64_t gen = cumulative_generation_bits(cfg.generation_rate_bits_per_day, (k + 1) * T) -
                                  cumulative_generation_bits(cfg.generation_rate_bits_per_day, k * T);
        for (BacklogLedger& l : led) {
            l.generated_bits += gen;
            l.backlog_bits += gen;
        }

        const Perturbation pert = apply_scenario_perturbation(cfg, k, M, perturb_rng);

        active_states.clear();
        active_ids.clear();
        active_relay.clear();
        for (std::size_t j = 0; j < N; ++j) {
            if (!relay_prop[j]) continue;
            try {
                active_states.push_back(relay_prop[j]->propagate(t));
                active_ids.push_back(in.relays[j].catalog_id);
                active_relay.push_back(j);
            } catch (const PropagationError& e) {
                quarantine(in.relays[j].name, e.what());
                relay_prop[j].reset();
            }
        }
        std::vector<char> user_ok(M, 0);
        for (std::size_t i = 0; i < M; ++i) {
            if (!user_prop[i]) continue;
            try {
                user_state[i] = user_prop[i]->propagate(t);
                user_ok[i] = 1;
            } catch (const PropagationError& e) {
                quarantine(in.user_ids[i], e.what());
                user_prop[i].reset();
            }
        }

        // Candidate links per user: (active slot, deliverable bits).
        std::vector<RelayRoute> routes(active_states.size());
        auto route_of = [&](std::size_t slot) -> const RouteChoice& {
            RelayRoute& r = routes[slot];
            if (!r.computed) {
                const Geodetic a = subpoint(active_states[slot]);
                r.route = best_pop_route(a.lat_deg, a.lon_deg, t, 0.0, in.pops, in.weather, cfg.tier, cfg.isl,
                                         cfg.session_seconds);
                r.computed = true;
            }
            return r.route;
        };

        struct Link {
            std::size_t slot;
            double deliverable;
        };
        std::vector<std::vector<Link>> links(M);
        std::vector<char> available(M, 0);
        for (std::size_t i = 0; i < M; ++i) {
            if (!pert.available[i]) {
                ++led[i].unavailable_sessions;
                continue;
            }
            available[i] = 1;
            if (!user_ok[i]) continue;
            const Strategy strategy = cfg.selection_mode == SelectionMode::Nearest ? Strategy::Nearest
                                      : cfg.selection_mode == SelectionMode::MinVelocityInRadius
                                          ? Strategy::MinVelocityInRadius
                                      : cfg.selection_mode == SelectionMode::VgOnly ? Strategy::ClosestToVg
                                                                                    : Strategy::Dual;
            const double radius = strategy == Strategy::Nearest ? std::numeric_limits<double>::infinity()
                                                                : cfg.selection.search_radius_km;
            const std::vector<Candidate> cands = candidates_within(user_state[i], active_states, radius, active_ids);
            const double lat = cands.empty() ? subpoint(user_state[i]).lat_deg : cands.front().geometry.subpoint_lat_deg;
            const SsdbRegion region = classify_ssdb(lat, cfg.selection.ssdb);
            if (pert.outside_ssdb_disconnected && region == SsdbRegion::Outside) continue;

            std::vector<const Candidate*> acceptable;
            if (strategy == Strategy::Dual) {
                const SelectionResult sel = select_dual(region, cands, cfg.selection, link);
                if (!sel.chosen) continue;
                // The chosen relay plus every candidate that passes the speed
                // filter of its region; the SNR gate below removes the rest.
                for (const Candidate& c : cands) {
                    const double v = c.geometry.relative_speed_kms;
                    bool ok = c.index == *sel.chosen;
                    if (region == SsdbRegion::Inside) {
                        ok = ok || v <= cfg.selection.v_ground_max_kms;
                    } else {
                        ok = ok || v <= cfg.selection.outside_disconnect_speed_kms;
                    }
                    if (ok) acceptable.push_back(&c);
                }
            } else {
                const SelectionResult sel = select(strategy, user_state[i], active_states, active_ids, cfg.selection, link);
                if (!sel.chosen) continue;
                for (const Candidate& c : cands) {
                    if (c.index == *sel.chosen) acceptable.push_back(&c);
                }
            }
            const double comp = cfg.radio.doppler_source == DopplerSource::RangeRate
                                    ? 0.0
                                    : doppler_compensation(region, cfg.selection);
            for (const Candidate* c : acceptable) {
                if (!link.snr_db(c->geometry, comp)) continue;
                const double d = route_of(c->index).quality.deliverable_bits;
                if (d > 0.0) links[i].push_back({c->index, d});
            }
        }

        // Relays that appear in any user's list form the session's rows.
        std::vector<std::size_t> row_of_slot(active_states.size(), static_cast<std::size_t>(-1));
        std::vector<std::size_t> slot_of_row;
        for (std::size_t i = 0; i < M; ++i) {
            for (const Link& l : links[i]) {
                if (row_of_slot[l.slot] == static_cast<std::size_t>(-1)) {
                    row_of_slot[l.slot] = slot_of_row.size();
                    slot_of_row.push_back(l.slot);
                }
            }
        }
        // Rows in catalog order keep tie-breaking independent of user order.
        std::sort(slot_of_row.begin(), slot_of_row.end(),
                  [&](std::size_t a, std::size_t b2) { return active_ids[a] < active_ids[b2]; });
        for (std::size_t r = 0; r < slot_of_row.size(); ++r) row_of_slot[slot_of_row[r]] = r;
        const std::size_t R = slot_of_row.size();

        std::vector<std::optional<std::size_t>> assigned(M);  // row
        Matrix<double> deliverable(R, M, 0.0);
        BoolMatrix feasible(R, M, 0);
        for (std::size_t i = 0; i < M; ++i) {
            for (const Link& l : links[i]) {
                deliverable(row_of_slot[l.slot], i) = l.deliverable;
                feasible(row_of_slot[l.slot], i) = 1;
            }
        }
        std::vector<double> backlog(M);
        for (std::size_t i = 0; i < M; ++i) backlog[i] = static_cast<double>(led[i].backlog_bits);

        if (cfg.selection_mode == SelectionMode::RandomAmongSelected) {
            std::vector<int> remaining(R, cfg.relay_capacity);
            std::vector<std::size_t> order(M);
            for (std::size_t i = 0; i < M; ++i) order[i] = i;
            std::shuffle(order.begin(), order.end(), pick_rng);
            for (std::size_t i : order) {
                if (backlog[i] <= 0.0) continue;
                std::vector<std::size_t> options;
                for (std::size_t r = 0; r < R; ++r) {
                    if (feasible(r, i) && remaining[r] > 0) options.push_back(r);
                }
                if (options.empty()) continue;
                std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
                const std::size_t r = options[pick(pick_rng)];
                --remaining[r];
                assigned[i] = r;
            }
        } else if (R > 0) {
            std::optional<BoolMatrix> previous;
            previous.emplace(R, M, 0);
            for (std::size_t i = 0; i < M; ++i) {
                if (prev_relay[i] < 0) continue;
                for (std::size_t r = 0; r < R; ++r) {
                    if (active_ids[slot_of_row[r]] == prev_relay[i]) (*previous)(r, i) = 1;
                }
            }
            SessionProblem problem = build_session(k, backlog, deliverable, feasible,
                                                   std::vector<int>(R, cfg.relay_capacity), previous, b);
            problem.penalty_mode = cfg.penalty_mode;
            const AssignmentPlan plan = solve_session(problem);
            assigned = plan.relay_of_user;
        }

        for (std::size_t i = 0; i < M; ++i) {
            BacklogLedger& l = led[i];
            const int before = prev_relay[i];
            if (!assigned[i]) {
                if (available[i]) ++l.disconnected_sessions;
                if (run_len[i] > 0) rep.connection_runs_s.push_back(static_cast<double>(run_len[i] * T));
                run_len[i] = 0;
                prev_relay[i] = -1;
                continue;
            }
            const std::size_t r = *assigned[i];
            const std::size_t slot = slot_of_row[r];
            const int relay_id = active_ids[slot];
            const bool sw = before != relay_id;
            const double value = std::min(backlog[i], deliverable(r, i));
            std::uint64_t delivered = static_cast<std::uint64_t>(std::floor(sw ? value - b * value : value));
            delivered = std::min(delivered, l.backlog_bits);
            l.backlog_bits -= delivered;
            l.delivered_bits += delivered;
            ++l.connected_sessions;
            if (sw) {
                ++l.switch_count;
                if (run_len[i] > 0) rep.connection_runs_s.push_back(static_cast<double>(run_len[i] * T));
                run_len[i] = 0;
            }
            ++run_len[i];
            prev_relay[i] = relay_id;
            RelayUsage& u = usage[relay_id];
            u.catalog_id = relay_id;
            u.connected_seconds += static_cast<double>(T);
            ++u.links;
            rep.plan.push_back({k, l.user_id, relay_id, route_of(slot).pop_id,
                                static_cast<std::uint64_t>(std::floor(value)), delivered, sw});
        }

        check_conservation(led);
        if (observer) observer(k, led);
    }
    for (std::size_t i = 0; i < M; ++i) {
        if (run_len[i] > 0) rep.connection_runs_s.push_back(static_cast<double>(run_len[i] * T));
    }
    for (const auto& [id, u] : usage) rep.relay_usage.push_back(u);
    rep.ledgers = std::move(led);
    rep.summary = summarize(rep.ledgers, cfg.session_seconds, rep.connection_runs_s);
    return rep;
}

}  // namespace ssu
