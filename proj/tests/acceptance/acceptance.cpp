// Runs every acceptance criterion and prints one PASS/FAIL line for each.
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "ssu/link_quality.hpp"
#include "ssu/pop_profiles.hpp"
#include "ssu/report.hpp"
#include "ssu/scheduler.hpp"
#include "ssu/selection.hpp"
#include "ssu/sgp4.hpp"
#include "ssu/sim.hpp"
#include "ssu/tle.hpp"
#include "test_support.hpp"

using namespace ssu;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome fspl_exactness() {
    const double l = fspl_db(550.0, 12e9);
    double worst = 0.0;
    for (double d : {1.0, 37.5, 550.0, 2000.0, 41000.0}) {
        for (double f : {2e9, 12e9, 30e9}) worst = std::max(worst, std::fabs(fspl_db(2 * d, f) - fspl_db(d, f) - 20.0 * std::log10(2.0)));
    }
    return {std::fabs(l - 168.83) <= 0.01 && worst <= 1e-9,
            fmt("fspl(550 km, 12 GHz) = %.4f dB, worst doubling error %.2e dB", l, worst)};
}

Outcome cfo_suite() {
    bool ok = true;
    for (double e : {1.0, 10.0, 100.0}) {
        ok = ok && cfo_snr(e, 0.0) == e;
        double prev = cfo_snr(e, 0.0);
        for (int k = 1; k <= 9; ++k) {
            const double v = cfo_snr(e, 0.05 * k);
            ok = ok && v < prev;
            prev = v;
        }
    }
    int thrown = 0;
    for (double e : {0.5, -0.5, 0.75, -3.0}) {
        try {
            cfo_snr(10.0, e);
        } catch (const EpsilonOutOfRange&) {
            ++thrown;
        }
    }
    return {ok && thrown == 4, fmt("identity and monotone decrease %s, %d/4 out-of-range inputs rejected",
                                   ok ? "hold" : "violated", thrown)};
}

Outcome matching_optimality() {
    std::mt19937_64 rng(20240601);
    std::size_t instances = 0, mismatches = 0;
    for (double b : {0.0, 0.2, 0.5}) {
        for (int k = 0; k < 400; ++k) {
            const SessionProblem p = test::random_problem(rng, b);
            if (std::fabs(solve_session(p).objective - test::brute_force_objective(p)) > 1e-9) ++mismatches;
            ++instances;
        }
    }
    return {instances >= 1000 && mismatches == 0, fmt("%zu instances, %zu mismatches", instances, mismatches)};
}

struct DeskRuns {
    std::map<std::string, SimulationSummary> summary;
    std::size_t checked = 0;
    std::size_t violations = 0;
    double seconds = 0.0;
};

const DeskRuns& desk_runs() {
    static const DeskRuns runs = [] {
        DeskRuns r;
        const auto t0 = std::chrono::steady_clock::now();
        for (const char* name : {"ssu", "random", "ssu75", "polar_outage", "wait_and_transfer"}) {
            const ScenarioConfig cfg = load_scenario(test::data_path(std::string("scenarios/desk/") + name + ".json"));
            const SimulationReport rep = run_scenario(cfg, 1, [&](std::size_t, std::span<const BacklogLedger> led) {
                for (const BacklogLedger& l : led) {
                    ++r.checked;
                    if (l.initial_bits + l.generated_bits != l.delivered_bits + l.backlog_bits) ++r.violations;
                }
            });
            r.summary[name] = rep.summary;
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return r;
    }();
    return runs;
}

Outcome conservation() {
    const DeskRuns& r = desk_runs();
    return {r.checked > 0 && r.violations == 0,
            fmt("%zu ledger checks over 5 scenarios, %zu violations", r.checked, r.violations)};
}

Outcome propagator_fidelity() {
    const auto sets = load_tle_file(test::data_path("sgp4/canon.tle"));
    std::map<int, OrbitalElements> by_id;
    for (const auto& e : sets) by_id[e.catalog_id] = e;
    double worst = 0.0;
    std::size_t n = 0;
    for (const auto& ref : test::load_reference_ephemeris()) {
        const Sgp4 prop(by_id.at(ref.catalog_id));
        const StateVector s = prop.propagate_minutes(ref.tsince_min);
        const double dr = std::hypot(s.position.x - ref.r[0], s.position.y - ref.r[1], s.position.z - ref.r[2]);
        worst = std::max(worst, dr);
        ++n;
    }
    return {n > 0 && worst < 1e-6, fmt("%zu reference states, worst position error %.3e km", n, worst)};
}

Outcome trend_reproduction() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto relays = load_tle_file(test::data_path("tle/starlink_snapshot.tle"));
    const auto fleet = load_tle_file(test::data_path("tle/eo_fleet.tle"));
    const auto polar = load_tle_file(test::data_path("tle/eo_polar.tle"));
    const UtcTime start = parse_utc("2025-03-01T00:00:00Z");
    const UtcTime end = add_seconds(start, 7200.0);
    const SelectionConfig cfg;
    const RadioConfig radio;
    auto run = [&](const OrbitalElements& user, Strategy s) {
        return summarize_trace(selection_trace(user, relays, start, end, 15.0, s, cfg, radio), s, cfg.v_ground_kms);
    };
    const TraceSummary nearest = run(fleet.front(), Strategy::Nearest);
    const TraceSummary dual = run(fleet.front(), Strategy::Dual);
    const TraceSummary outside = run(polar.front(), Strategy::Dual);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool a = nearest.max_relative_speed_kms >= 13.0;
    const bool b = dual.p95_abs_dev_from_vg_kms < nearest.p95_abs_dev_from_vg_kms;
    const bool c = outside.outside_rows > 0 && outside.outside_median_speed_kms <= 3.0;
    return {a && b && c && secs <= 120.0,
            fmt("(a) nearest max %.2f km/s %s; (b) p95 |v-vg| dual %.2f vs nearest %.2f %s; "
                "(c) outside median %.2f km/s over %zu steps %s; %.1f s",
                nearest.max_relative_speed_kms, a ? "ok" : "FAIL", dual.p95_abs_dev_from_vg_kms,
                nearest.p95_abs_dev_from_vg_kms, b ? "ok" : "FAIL", outside.outside_median_speed_kms,
                outside.outside_rows, c ? "ok" : "FAIL", secs)};
}

Outcome system_ordering() {
    const DeskRuns& r = desk_runs();
    auto med = [&](const char* n) { return r.summary.at(n).median_backlog_bits / kBitsPerGigabyte; };
    const double ssu = med("ssu"), rnd = med("random"), s75 = med("ssu75"), polar = med("polar_outage"),
                 wt = med("wait_and_transfer");
    const double margin = (rnd - ssu) / ssu;
    const bool order = ssu < rnd && rnd < wt && ssu < s75 && s75 < wt && ssu < polar && polar < wt;
    const bool ok = order && margin >= 0.05 && r.seconds <= 300.0;
    return {ok, fmt("median GB: SSU %.3f, random %.3f (margin %.1f%%, need 5%%), SSU(75%%) %.3f, polar outage %.3f, "
                    "wait-and-transfer %.3f; ordering %s; %.1f s",
                    ssu, rnd, 100.0 * margin, s75, polar, wt, order ? "holds" : "violated", r.seconds)};
}

Outcome isl_fixture() {
    PopProfile p;
    p.pop_id = "fixture";
    p.weather[WeatherClass::Clear] = {0.0027, 30.0};
    p.tier_rates_bps[Tier::Business] = 1e8;
    const IslModel isl;
    const double full = pop_route_quality(p, WeatherClass::Clear, Tier::Business, 2100.0, isl, 15.0).loss_rate;
    const double half = pop_route_quality(p, WeatherClass::Clear, Tier::Business, 1050.0, isl, 15.0).loss_rate;
    const bool ok = std::fabs(full - 0.0062) <= 1e-9 && std::fabs(half - 0.00445) <= 1e-9;
    return {ok, fmt("loss at 2100 km %.6f%%, at 1050 km %.6f%%", 100.0 * full, 100.0 * half)};
}

Outcome determinism() {
    test::TempDir dir("acceptance-determinism");
    std::ostringstream out, err;
    const std::string scenario = test::data_path("scenarios/desk/ssu.json").string();
    for (const char* sub : {"a", "b"}) {
        const int code = cli::run({"simulate", "--scenario", scenario, "--seed", "1", "--out", (dir / sub).string()},
                                  out, err);
        if (code != 0) return {false, "simulate exited with " + std::to_string(code) + ": " + err.str()};
    }
    std::size_t files = 0, differ = 0;
    for (const auto& e : fs::recursive_directory_iterator(dir / "a")) {
        if (!e.is_regular_file()) continue;
        ++files;
        const fs::path other = dir / "b" / fs::relative(e.path(), dir / "a");
        if (!fs::exists(other) || test::read_file(e.path()) != test::read_file(other)) ++differ;
    }
    return {files > 0 && differ == 0, fmt("%zu files compared, %zu differ", files, differ)};
}

bool in_range(const OrbitalElements& e) {
    return e.catalog_id >= 0 && e.catalog_id <= 99999 && e.inclination_deg >= 0.0 && e.inclination_deg <= 180.0 &&
           e.raan_deg >= 0.0 && e.raan_deg < 360.0 && e.eccentricity >= 0.0 && e.eccentricity < 1.0 &&
           e.arg_perigee_deg >= 0.0 && e.arg_perigee_deg < 360.0 && e.mean_anomaly_deg >= 0.0 &&
           e.mean_anomaly_deg < 360.0 && e.mean_motion_rev_per_day > 0.0 &&
           1440.0 / e.mean_motion_rev_per_day < kDeepSpacePeriodMinutes;
}

Outcome parser_robustness() {
    std::vector<std::pair<std::string, std::string>> records;
    std::vector<fs::path> files = {test::data_path("sgp4/canon.tle")};
    for (const auto& e : fs::directory_iterator(test::data_path("tle"))) files.push_back(e.path());
    for (const fs::path& f : files) {
        std::istringstream in(test::read_file(f));
        std::string line, prev;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.rfind("2 ", 0) == 0 && prev.rfind("1 ", 0) == 0) records.emplace_back(prev, line);
            prev = line;
        }
    }
    // Every digit of every line replaced by each other digit.
    std::size_t corruptions = 0, accepted = 0;
    for (const auto& [l1, l2] : records) {
        for (int which = 0; which < 2; ++which) {
            std::string line = which == 0 ? l1 : l2;
            for (std::size_t pos = 0; pos < line.size() && pos < 69; ++pos) {
                const char orig = line[pos];
                if (orig < '0' || orig > '9') continue;
                for (char d = '0'; d <= '9'; ++d) {
                    if (d == orig) continue;
                    line[pos] = d;
                    ++corruptions;
                    try {
                        (void)(which == 0 ? parse_tle_record(line, l2) : parse_tle_record(l1, line));
                        ++accepted;
                    } catch (const TleError&) {
                    }
                }
                line[pos] = orig;
            }
        }
    }
    // Random edits with the checksum repaired: whatever the parser accepts
    // must satisfy the field ranges.
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<std::size_t> pick_rec(0, records.size() - 1), pick_pos(0, 67);
    const std::string alphabet = "0123456789 -+.ABCXYZ";
    std::uniform_int_distribution<std::size_t> pick_char(0, alphabet.size() - 1);
    std::size_t fuzz_accepted = 0, bad_accepted = 0;
    for (int k = 0; k < 50000; ++k) {
        auto [l1, l2] = records[pick_rec(rng)];
        std::string& line = k % 2 == 0 ? l1 : l2;
        line[pick_pos(rng)] = alphabet[pick_char(rng)];
        line[68] = static_cast<char>('0' + tle_checksum(line));
        try {
            const OrbitalElements e = parse_tle_record(l1, l2);
            ++fuzz_accepted;
            if (!in_range(e)) ++bad_accepted;
        } catch (const TleError&) {
        }
    }
    return {accepted == 0 && bad_accepted == 0,
            fmt("%zu records, %zu digit corruptions, %zu accepted; fuzz %zu accepted, %zu out of range",
                records.size(), corruptions, accepted, fuzz_accepted, bad_accepted)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"1 path-loss exactness", fspl_exactness},
        {"2 carrier-offset SNR suite", cfo_suite},
        {"3 matching optimality", matching_optimality},
        {"4 backlog conservation", conservation},
        {"5 propagator fidelity", propagator_fidelity},
        {"6 relay selection trends", trend_reproduction},
        {"7 system ordering at desk scale", system_ordering},
        {"8 ISL loss fixture", isl_fixture},
        {"9 determinism", determinism},
        {"10 parser robustness", parser_robustness},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
