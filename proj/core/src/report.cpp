#include "ssu/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "ssu/csv.hpp"

namespace ssu {

void write_ledger_csv(std::ostream& out, const std::vector<BacklogLedger>& ledgers) {
    out << "user_id,catalog_id,initial_bits,generated_bits,delivered_bits,backlog_bits,connected_sessions,"
           "disconnected_sessions,unavailable_sessions,switch_count\n";
    for (const BacklogLedger& l : ledgers) {
        out << l.user_id << ',' << l.catalog_id << ',' << l.initial_bits << ',' << l.generated_bits << ','
            << l.delivered_bits << ',' << l.backlog_bits << ',' << l.connected_sessions << ','
            << l.disconnected_sessions << ',' << l.unavailable_sessions << ',' << l.switch_count << '\n';
    }
}

std::vector<BacklogLedger> read_ledger_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open ledger " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    const auto rows = csv::parse(ss.str());
    if (rows.empty() || rows[0].size() != 10 || rows[0][0] != "user_id") {
        throw SchemaViolation(path.string(), "not a ledger CSV");
    }
    std::vector<BacklogLedger> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& f = rows[r];
        if (f.size() != 10) throw SchemaViolation(path.string() + " row " + std::to_string(r + 1), "expected 10 fields");
        try {
            BacklogLedger l;
            l.user_id = f[0];
            l.catalog_id = std::stoi(f[1]);
            l.initial_bits = std::stoull(f[2]);
            l.generated_bits = std::stoull(f[3]);
            l.delivered_bits = std::stoull(f[4]);
            l.backlog_bits = std::stoull(f[5]);
            l.connected_sessions = std::stoull(f[6]);
            l.disconnected_sessions = std::stoull(f[7]);
            l.unavailable_sessions = std::stoull(f[8]);
            l.switch_count = std::stoull(f[9]);
            out.push_back(l);
        } catch (const std::logic_error&) {
            throw SchemaViolation(path.string() + " row " + std::to_string(r + 1), "bad number");
        }
    }
    return out;
}

void write_plan_csv(std::ostream& out, const std::vector<PlanRow>& plan) {
    out << "session_index,user_id,relay_id,pop_id,value_bits,delivered_bits,was_switch\n";
    for (const PlanRow& p : plan) {
        out << p.session_index << ',' << p.user_id << ',' << p.relay_id << ',' << p.pop_id << ',' << p.value_bits
            << ',' << p.delivered_bits << ',' << (p.was_switch ? 1 : 0) << '\n';
    }
}

void write_backlog_cdf_csv(std::ostream& out, const SimulationSummary& summary) {
    out << "backlog_bits,backlog_gb,cdf\n";
    for (const auto& [bits, p] : summary.backlog_cdf) {
        out << csv::num(bits) << ',' << csv::fixed(bits / kBitsPerGigabyte, 6) << ',' << csv::fixed(p, 6) << '\n';
    }
}

void write_relay_usage_csv(std::ostream& out, const std::vector<RelayUsage>& usage) {
    out << "relay_id,connected_seconds,links\n";
    for (const RelayUsage& u : usage) out << u.catalog_id << ',' << csv::num(u.connected_seconds) << ',' << u.links << '\n';
}

std::string summary_json(const SimulationReport& r) {
    using nlohmann::ordered_json;
    const SimulationSummary& s = r.summary;
    ordered_json j;
    j["scenario"] = r.config.name;
    j["seed"] = r.seed;
    j["start_epoch"] = format_utc(r.start);
    j["mode"] = r.config.baseline ? "wait_and_transfer" : to_string(r.config.selection_mode);
    j["users"] = s.users;
    j["sessions"] = s.sessions;
    j["median_backlog_bits"] = s.median_backlog_bits;
    j["p90_backlog_bits"] = s.p90_backlog_bits;
    j["median_backlog_gb"] = s.median_backlog_bits / kBitsPerGigabyte;
    j["p90_backlog_gb"] = s.p90_backlog_bits / kBitsPerGigabyte;
    j["total_generated_bits"] = s.total_generated_bits;
    j["total_delivered_bits"] = s.total_delivered_bits;
    j["total_backlog_bits"] = s.total_backlog_bits;
    j["delivered_fraction"] = s.delivered_fraction;
    j["total_switches"] = s.total_switches;
    j["connected_user_sessions"] = s.connected_user_sessions;
    j["disconnected_user_sessions"] = s.disconnected_user_sessions;
    j["unavailable_user_sessions"] = s.unavailable_user_sessions;
    j["average_connection_time_s"] = s.average_connection_time_s;
    if (r.config.baseline) {
        j["note"] = "ground-station results scale with the configured contact_rate_bps";
        j["contact_rate_bps"] = r.config.baseline->contact_rate_bps;
    }
    j["quarantined"] = r.quarantined;
    j["config"] = nlohmann::json::parse(scenario_to_json(r.config));
    return j.dump(2) + "\n";
}

TraceSummary summarize_trace(const SelectionTrace& trace, Strategy strategy, double v_ground_kms) {
    TraceSummary s;
    s.strategy = to_string(strategy);
    s.rows = trace.rows.size();
    std::vector<double> speed, dist, dev, outside;
    for (const TraceRow& row : trace.rows) {
        const SelectionResult& r = row.result;
        ++s.rule_counts[to_string(r.rule)];
        if (r.region == SsdbRegion::Outside) {
            ++s.outside_rows;
            if (r.geometry.distance_km > 0.0) outside.push_back(r.geometry.relative_speed_kms);
        }
        if (!r.chosen) continue;
        ++s.connected_rows;
        speed.push_back(r.geometry.relative_speed_kms);
        dist.push_back(r.geometry.distance_km);
        dev.push_back(std::fabs(r.geometry.relative_speed_kms - v_ground_kms));
    }
    if (!speed.empty()) {
        s.max_relative_speed_kms = *std::max_element(speed.begin(), speed.end());
        s.median_relative_speed_kms = quantile(speed, 0.5);
        s.p95_abs_dev_from_vg_kms = quantile(dev, 0.95);
        s.median_distance_km = quantile(dist, 0.5);
        s.p95_distance_km = quantile(dist, 0.95);
        for (int k = 0; k <= 20; ++k) {
            const double p = k / 20.0;
            s.cdf.push_back({p, quantile(dist, p), quantile(speed, p)});
        }
    }
    if (!outside.empty()) s.outside_median_speed_kms = quantile(outside, 0.5);
    s.sessions = trace.sessions.size();
    s.average_connection_time_s = trace.average_connection_time_s();
    return s;
}

std::string trace_summary_json(const TraceSummary& s) {
    nlohmann::ordered_json j;
    j["strategy"] = s.strategy;
    j["rows"] = s.rows;
    j["connected_rows"] = s.connected_rows;
    j["max_relative_speed_kms"] = s.max_relative_speed_kms;
    j["median_relative_speed_kms"] = s.median_relative_speed_kms;
    j["p95_abs_dev_from_vg_kms"] = s.p95_abs_dev_from_vg_kms;
    j["median_distance_km"] = s.median_distance_km;
    j["p95_distance_km"] = s.p95_distance_km;
    j["outside_rows"] = s.outside_rows;
    j["outside_median_speed_kms"] = s.outside_median_speed_kms;
    j["sessions"] = s.sessions;
    j["average_connection_time_s"] = s.average_connection_time_s;
    j["rule_counts"] = s.rule_counts;
    return j.dump(2) + "\n";
}

void write_trace_cdf_csv(std::ostream& out, const TraceSummary& s) {
    out << "p,distance_km,relative_speed_kms\n";
    for (const auto& [p, d, v] : s.cdf) out << csv::fixed(p, 2) << ',' << csv::fixed(d, 6) << ',' << csv::fixed(v, 6) << '\n';
}

OutputBundle::OutputBundle(std::filesystem::path target) : target_(std::move(target)) {}

void OutputBundle::add(const std::string& name, std::string content) { files_[name] = std::move(content); }

void OutputBundle::commit() const {
    namespace fs = std::filesystem;
    const fs::path target = fs::absolute(target_).lexically_normal();
    const fs::path parent = target.parent_path();
    std::error_code ec;
    fs::create_directories(parent, ec);
    if (ec) throw Error("cannot create " + parent.string() + ": " + ec.message());

    const std::string tag = std::to_string(::getpid());
    const fs::path staging = parent / ("." + target.filename().string() + ".staging-" + tag);
    fs::remove_all(staging, ec);
    fs::create_directory(staging, ec);
    if (ec) throw Error("cannot create " + staging.string() + ": " + ec.message());
    try {
        for (const auto& [name, content] : files_) {
            const fs::path file = staging / name;
            fs::create_directories(file.parent_path());
            std::ofstream out(file, std::ios::binary);
            out << content;
            out.close();
            if (!out) throw Error("cannot write " + file.string());
        }
        if (fs::exists(target)) {
            const fs::path old = parent / ("." + target.filename().string() + ".old-" + tag);
            fs::remove_all(old);
            fs::rename(target, old);
            fs::rename(staging, target);
            fs::remove_all(old);
        } else {
            fs::rename(staging, target);
        }
    } catch (...) {
        fs::remove_all(staging, ec);
        throw;
    }
}

OutputBundle simulation_bundle(const SimulationReport& report, const std::filesystem::path& out_dir, bool with_plan) {
    OutputBundle b(out_dir);
    b.add("summary.json", summary_json(report));
    std::ostringstream ledger, cdf, usage;
    write_ledger_csv(ledger, report.ledgers);
    write_backlog_cdf_csv(cdf, report.summary);
    write_relay_usage_csv(usage, report.relay_usage);
    b.add("ledger.csv", ledger.str());
    b.add("backlog_cdf.csv", cdf.str());
    b.add("relay_usage.csv", usage.str());
    if (with_plan) {
        std::ostringstream plan;
        write_plan_csv(plan, report.plan);
        b.add("plan.csv", plan.str());
    }
    return b;
}

}  // namespace ssu
