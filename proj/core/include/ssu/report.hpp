#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ssu/selection.hpp"
#include "ssu/sim.hpp"

namespace ssu {

inline constexpr double kBitsPerGigabyte = 8e9;

void write_ledger_csv(std::ostream& out, const std::vector<BacklogLedger>& ledgers);
std::vector<BacklogLedger> read_ledger_csv(const std::filesystem::path& path);

void write_plan_csv(std::ostream& out, const std::vector<PlanRow>& plan);
void write_backlog_cdf_csv(std::ostream& out, const SimulationSummary& summary);
void write_relay_usage_csv(std::ostream& out, const std::vector<RelayUsage>& usage);

/// Summary document for one run, JSON.
std::string summary_json(const SimulationReport& report);

struct TraceSummary {
    std::string strategy;
    std::size_t rows = 0;
    std::size_t connected_rows = 0;
    double max_relative_speed_kms = 0.0;
    double median_relative_speed_kms = 0.0;
    double p95_abs_dev_from_vg_kms = 0.0;
    double median_distance_km = 0.0;
    double p95_distance_km = 0.0;
    std::size_t outside_rows = 0;
    /// Median speed of the slowest in-range relay over outside-SSDB steps,
    /// whether or not it was accepted. Zero with no such steps.
    double outside_median_speed_kms = 0.0;
    std::size_t sessions = 0;
    double average_connection_time_s = 0.0;
    std::map<std::string, std::size_t> rule_counts;
    /// (p, distance quantile, speed quantile) over connected rows.
    std::vector<std::array<double, 3>> cdf;
};

TraceSummary summarize_trace(const SelectionTrace& trace, Strategy strategy, double v_ground_kms);
std::string trace_summary_json(const TraceSummary& s);
void write_trace_cdf_csv(std::ostream& out, const TraceSummary& s);

/// Collects files in memory and publishes them as one directory: they are
/// written to a staging directory next to the target, which then replaces
/// the target by rename. Nothing is left behind if commit() never runs.
class OutputBundle {
public:
    explicit OutputBundle(std::filesystem::path target);

    void add(const std::string& name, std::string content);
    const std::map<std::string, std::string>& files() const noexcept { return files_; }
    void commit() const;

private:
    std::filesystem::path target_;
    std::map<std::string, std::string> files_;
};

/// summary.json, ledger.csv, backlog_cdf.csv, relay_usage.csv and
/// (when `with_plan`) plan.csv.
OutputBundle simulation_bundle(const SimulationReport& report, const std::filesystem::path& out_dir,
                               bool with_plan = true);

}  // namespace ssu
