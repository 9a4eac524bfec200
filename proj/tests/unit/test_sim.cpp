#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "ssu/earth.hpp"
#include "ssu/sim.hpp"
#include "test_support.hpp"

using namespace ssu;

namespace {

ScenarioConfig desk(const std::string& name, std::vector<Override> extra = {}) {
    extra.emplace_back("duration_hours", "0.25");
    return load_scenario(test::data_path("scenarios/desk/" + name + ".json"), extra);
}

// Type-7 sample quantile written out from the definition.
double oracle_quantile(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    const double h = (static_cast<double>(v.size()) - 1.0) * p;
    const double lo = std::floor(h);
    const double hi = std::ceil(h);
    return v[static_cast<std::size_t>(lo)] +
           (h - lo) * (v[static_cast<std::size_t>(hi)] - v[static_cast<std::size_t>(lo)]);
}

}  // namespace

TEST(Quantile, MatchesDefinition) {
    EXPECT_DOUBLE_EQ(quantile({1, 2, 3, 4}, 0.5), 2.5);
    EXPECT_DOUBLE_EQ(quantile({5}, 0.9), 5.0);
    EXPECT_DOUBLE_EQ(quantile({10, 0}, 0.9), 9.0);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (int k = 0; k < 200; ++k) {
        std::vector<double> v(1 + k % 37);
        for (double& x : v) x = u(rng);
        for (double p : {0.0, 0.1, 0.5, 0.9, 1.0}) EXPECT_NEAR(quantile(v, p), oracle_quantile(v, p), 1e-9);
    }
    EXPECT_THROW(quantile({}, 0.5), EmptyInput);
}

TEST(Generation, CumulativeIsExactAndAdditive) {
    EXPECT_EQ(cumulative_generation_bits(4'000'000'000'000ULL, 86400), 4'000'000'000'000ULL);
    EXPECT_EQ(cumulative_generation_bits(86400, 15), 15u);
    EXPECT_EQ(cumulative_generation_bits(100, 863), 0u);  // floor(100 * 863 / 86400)
    EXPECT_EQ(cumulative_generation_bits(100, 864), 1u);
    // Summing the per-session increments reproduces the daily total.
    std::uint64_t sum = 0;
    for (std::uint64_t k = 0; k < 5760; ++k) {
        sum += cumulative_generation_bits(4'000'000'000'001ULL, (k + 1) * 15) -
               cumulative_generation_bits(4'000'000'000'001ULL, k * 15);
    }
    EXPECT_EQ(sum, 4'000'000'000'001ULL);
    EXPECT_EQ(cumulative_generation_bits(~0ULL / 2, 86400 * 3), (~0ULL / 2) * 3);
}

TEST(Fleet, MultiplierAddsPhaseShiftedTwins) {
    const auto fleet = load_tle_file(test::data_path("tle/eo_polar.tle"));
    ASSERT_FALSE(fleet.empty());
    std::vector<std::string> ids;
    const auto out = multiply_fleet(std::span(fleet.data(), 1), 4, &ids);
    ASSERT_EQ(out.size(), 4u);
    const double m0 = fleet[0].mean_anomaly_deg;
    const double s = 360.0 / 5.0;
    const double expected[] = {m0, m0 + s, m0 - s, m0 + 2 * s};
    for (int k = 0; k < 4; ++k) {
        EXPECT_NEAR(out[k].mean_anomaly_deg, std::fmod(expected[k] + 720.0, 360.0), 1e-9);
        EXPECT_EQ(out[k].catalog_id, fleet[0].catalog_id);
    }
    EXPECT_EQ(ids[0], fleet[0].name);
    EXPECT_EQ(ids[2], fleet[0].name + "/2");
    EXPECT_EQ(multiply_fleet(fleet, 1).size(), fleet.size());
    EXPECT_THROW(multiply_fleet(fleet, 0), ConfigError);
}

TEST(Perturbation, OneDrawPerUser) {
    ScenarioConfig c;
    for (double f : {1.0, 0.75, 0.0}) {
        c.availability_fraction = f;
        SimRng a(11), ref(11);
        const Perturbation p = apply_scenario_perturbation(c, 0, 50, a);
        ref.discard(50);
        EXPECT_EQ(a(), ref());
        const auto on = std::count(p.available.begin(), p.available.end(), 1);
        if (f == 1.0) EXPECT_EQ(on, 50);
        if (f == 0.0) EXPECT_EQ(on, 0);
    }
    c.availability_fraction = 0.75;
    SimRng rng(5);
    std::size_t on = 0;
    for (int k = 0; k < 200; ++k) {
        const Perturbation p = apply_scenario_perturbation(c, k, 100, rng);
        on += std::count(p.available.begin(), p.available.end(), 1);
    }
    EXPECT_NEAR(static_cast<double>(on) / 20000.0, 0.75, 0.02);
    c.polar_outage = true;
    EXPECT_TRUE(apply_scenario_perturbation(c, 0, 1, rng).outside_ssdb_disconnected);
}

TEST(Simulation, ConservedEverySessionAndDeterministic) {
    const ScenarioConfig cfg = desk("ssu");
    const LoadedScenario in = load_inputs(cfg);
    std::size_t calls = 0;
    const SimulationReport a = run_scenario(cfg, in, 7, [&](std::size_t k, std::span<const BacklogLedger> led) {
        EXPECT_EQ(k, calls);
        ++calls;
        for (const BacklogLedger& l : led) ASSERT_TRUE(l.conserved()) << l.user_id << " at session " << k;
    });
    EXPECT_EQ(calls, cfg.session_count());
    const SimulationReport b = run_scenario(cfg, in, 7);
    ASSERT_EQ(a.ledgers.size(), b.ledgers.size());
    for (std::size_t i = 0; i < a.ledgers.size(); ++i) {
        EXPECT_EQ(a.ledgers[i].backlog_bits, b.ledgers[i].backlog_bits);
        EXPECT_EQ(a.ledgers[i].switch_count, b.ledgers[i].switch_count);
    }
    EXPECT_EQ(a.plan.size(), b.plan.size());
    EXPECT_GT(a.summary.total_delivered_bits, 0u);
    EXPECT_EQ(a.summary.sessions, cfg.session_count());

    // Plan rows add up to each ledger's delivered total.
    std::map<std::string, std::uint64_t> by_user;
    for (const PlanRow& r : a.plan) {
        by_user[r.user_id] += r.delivered_bits;
        EXPECT_LE(r.delivered_bits, r.value_bits);
        if (!r.was_switch) EXPECT_EQ(r.delivered_bits, r.value_bits);
    }
    for (const BacklogLedger& l : a.ledgers) EXPECT_EQ(by_user[l.user_id], l.delivered_bits);
}

TEST(Simulation, PerturbationsOnlyRemoveService) {
    const ScenarioConfig base = desk("ssu");
    const LoadedScenario in = load_inputs(base);
    const SimulationReport full = run_scenario(base, in, 3);
    ScenarioConfig none = base;
    none.availability_fraction = 0.0;
    const SimulationReport off = run_scenario(none, in, 3);
    EXPECT_EQ(off.summary.total_delivered_bits, 0u);
    EXPECT_EQ(off.summary.unavailable_user_sessions, off.summary.users * off.summary.sessions);
    ScenarioConfig polar = base;
    polar.polar_outage = true;
    const SimulationReport p = run_scenario(polar, in, 3);
    EXPECT_LE(p.summary.connected_user_sessions, full.summary.connected_user_sessions);
}

TEST(Simulation, RandomBaselineRespectsCapacity) {
    ScenarioConfig cfg = desk("random");
    cfg.relay_capacity = 1;
    const SimulationReport r = run_scenario(cfg, 9);
    std::map<std::pair<std::size_t, int>, int> load;
    for (const PlanRow& row : r.plan) {
        const int n = ++load[std::make_pair(row.session_index, row.relay_id)];
        EXPECT_LE(n, 1);
    }
    EXPECT_GT(r.plan.size(), 0u);
}

TEST(ContactWindows, AgreeWithOneSecondScan) {
    const auto fleet = load_tle_file(test::data_path("tle/eo_polar.tle"));
    const GroundStation st{"svalbard", 78.23, 15.39, 0.5};
    const UtcTime start = parse_utc("2025-03-01T00:00:00Z");
    const UtcTime end = add_seconds(start, 6 * 3600.0);
    const auto windows = contact_windows(fleet[0], st, 25.0, start, end);
    ASSERT_FALSE(windows.empty());

    const Sgp4 prop(fleet[0]);
    std::vector<std::pair<double, double>> scan;  // [open, close) in seconds
    bool inside = false;
    for (int s = 0; s <= 6 * 3600; ++s) {
        const UtcTime t = add_seconds(start, s);
        const bool now = elevation_deg(st.lat_deg, st.lon_deg, st.alt_km, prop.propagate(t).position, t) > 25.0;
        if (now && !inside) scan.emplace_back(s, 6 * 3600.0);
        if (!now && inside) scan.back().second = s;
        inside = now;
    }
    ASSERT_EQ(windows.size(), scan.size());
    for (std::size_t w = 0; w < scan.size(); ++w) {
        EXPECT_NEAR(seconds_between(start, windows[w].start), scan[w].first, 1.0);
        EXPECT_NEAR(seconds_between(start, windows[w].end), scan[w].second, 1.0);
        EXPECT_GT(windows[w].duration_s(), 0.0);
    }
    EXPECT_THROW(contact_windows(fleet[0], st, 25.0, start, end, 0.0), ConfigError);
}

TEST(WaitAndTransfer, DeliversAtContactRateDuringContacts) {
    const auto fleet = load_tle_file(test::data_path("tle/eo_polar.tle"));
    WaitAndTransferConfig cfg;
    cfg.stations = {{"svalbard", 78.23, 15.39, 0.5}};
    cfg.contact_rate_bps = 1e6;
    const UtcTime start = parse_utc("2025-03-01T00:00:00Z");
    std::vector<PlanRow> plan;
    const auto led = run_wait_and_transfer(cfg, std::span(fleet.data(), 1), {}, start, 6.0, 15,
                                           4'000'000'000'000ULL, 0, &plan);
    ASSERT_EQ(led.size(), 1u);
    EXPECT_TRUE(led[0].conserved());
    EXPECT_EQ(led[0].connected_sessions + led[0].disconnected_sessions, 1440u);
    ASSERT_FALSE(plan.empty());
    for (const PlanRow& r : plan) {
        EXPECT_EQ(r.relay_id, -1);
        EXPECT_LE(r.delivered_bits, 15'000'000u);
    }
    // The rate is far below generation, so each contact session saturates.
    EXPECT_EQ(led[0].delivered_bits, 15'000'000u * led[0].connected_sessions);

    // Connected sessions line up with the refined contact windows.
    const auto windows = contact_windows(fleet[0], cfg.stations[0], cfg.min_elevation_deg, start,
                                         add_seconds(start, 6 * 3600.0));
    std::size_t expected = 0;
    for (int k = 0; k < 1440; ++k) {
        const UtcTime t = add_seconds(start, 15.0 * k);
        for (const ContactWindow& w : windows) {
            if (t > w.start && t < w.end) ++expected;
        }
    }
    EXPECT_NEAR(static_cast<double>(led[0].connected_sessions), static_cast<double>(expected), 2.0);
    EXPECT_THROW(run_wait_and_transfer(cfg, fleet, std::vector<std::string>{"x", "y"}, start, 1.0, 15, 1),
                 DimensionMismatch);
}

TEST(Summary, Statistics) {
    std::vector<BacklogLedger> led(4);
    const std::uint64_t backlog[] = {40, 10, 30, 20};
    for (int i = 0; i < 4; ++i) {
        led[i].generated_bits = 100;
        led[i].backlog_bits = backlog[i];
        led[i].delivered_bits = 100 - backlog[i];
        led[i].connected_sessions = 3;
        led[i].disconnected_sessions = 1;
    }
    const std::vector<double> runs = {15.0, 45.0};
    const SimulationSummary s = summarize(led, 15.0, runs);
    EXPECT_DOUBLE_EQ(s.median_backlog_bits, 25.0);
    EXPECT_DOUBLE_EQ(s.p90_backlog_bits, 37.0);
    EXPECT_DOUBLE_EQ(s.delivered_fraction, 0.75);
    EXPECT_EQ(s.sessions, 4u);
    EXPECT_DOUBLE_EQ(s.average_connection_time_s, 30.0);
    ASSERT_EQ(s.backlog_cdf.size(), 4u);
    EXPECT_DOUBLE_EQ(s.backlog_cdf.front().first, 10.0);
    EXPECT_DOUBLE_EQ(s.backlog_cdf.back().second, 1.0);
    EXPECT_THROW(summarize({}), EmptyInput);
}
