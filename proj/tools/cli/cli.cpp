#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "ssu/csv.hpp"
#include "ssu/earth.hpp"
#include "ssu/error.hpp"
#include "ssu/geometry.hpp"
#include "ssu/report.hpp"
#include "ssu/scenario.hpp"
#include "ssu/selection.hpp"
#include "ssu/sgp4.hpp"
#include "ssu/sim.hpp"
#include "ssu/tle.hpp"

namespace ssu::cli {
namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string tle;
    std::string relays;
    std::string scenario;
    std::string out;
    std::uint64_t seed = 1;
    std::vector<std::string> sets;
    std::string strategy = "dual";
    double cell_size = 5.0;
    std::string window = "2h";
    double step = 15.0;
    std::string start;
    std::string epoch;
    int user = -1;
    std::string param;
    std::string values;
    std::vector<std::string> inputs;
    bool no_plan = false;
};

fs::path output_dir(const Options& o) {
    if (!o.out.empty()) return o.out;
    if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') return env;
    return "ssu-out";
}

/// "7200", "7200s", "120m" or "2h" as seconds.
double parse_window(const std::string& text) {
    if (text.empty()) throw UsageError("empty --window");
    double scale = 1.0;
    std::string_view digits = text;
    switch (text.back()) {
        case 's': digits.remove_suffix(1); break;
        case 'm': scale = 60.0; digits.remove_suffix(1); break;
        case 'h': scale = 3600.0; digits.remove_suffix(1); break;
        default: break;
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || !(v >= 0.0)) {
        throw UsageError("bad --window '" + text + "'");
    }
    return v * scale;
}

std::vector<Override> overrides(const Options& o) {
    std::vector<Override> out;
    for (const std::string& s : o.sets) out.push_back(parse_override(s));
    return out;
}

UtcTime latest_epoch(std::span<const OrbitalElements> a, std::span<const OrbitalElements> b = {}) {
    UtcTime t{};
    bool any = false;
    for (auto set : {a, b}) {
        for (const OrbitalElements& e : set) {
            if (!any || e.epoch > t) t = e.epoch;
            any = true;
        }
    }
    if (!any) throw EmptyInput("no element sets loaded");
    return t;
}

int cmd_validate_tle(const Options& o, std::ostream& out, std::ostream& err) {
    std::ifstream in(o.tle);
    if (!in) throw IngestError("cannot open " + o.tle);
    const TleParseResult r = parse_tle(in);
    for (const TleDiagnostic& d : r.diagnostics) err << o.tle << ": " << to_string(d) << '\n';
    out << "accepted " << r.records.size() << " rejected " << r.diagnostics.size() << '\n';
    return r.diagnostics.empty() ? kOk : kIngest;
}

int cmd_density(const Options& o, std::ostream& out, std::ostream& err) {
    const std::vector<OrbitalElements> sats = load_tle_file(o.tle);
    const UtcTime at = o.epoch.empty() ? latest_epoch(sats) : parse_utc(o.epoch);
    std::vector<StateVector> states;
    states.reserve(sats.size());
    std::size_t skipped = 0;
    for (const OrbitalElements& e : sats) {
        try {
            states.push_back(propagate(e, at));
        } catch (const PropagationError& ex) {
            ++skipped;
            err << "skipped " << e.catalog_id << ": " << ex.what() << '\n';
        }
    }
    const DensityGrid grid = density_grid(states, o.cell_size);
    std::ostringstream csv;
    write_density_csv(csv, grid);
    OutputBundle bundle(output_dir(o));
    bundle.add("density.csv", csv.str());
    bundle.commit();
    out << "density: " << states.size() << " satellites at " << format_utc(at) << " (" << skipped << " skipped)\n";
    return kOk;
}

int cmd_trace_selection(const Options& o, std::ostream& out, std::ostream&) {
    if (o.relays.empty()) throw UsageError("trace-selection needs --relays");
    const Strategy strategy = [&] {
        try {
            return parse_strategy(o.strategy);
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
    }();
    const double window_s = parse_window(o.window);
    if (!(o.step > 0.0)) throw UsageError("--step must be positive");

    SelectionConfig sel;
    RadioConfig radio;
    GravityModel gravity = GravityModel::Wgs72;
    if (!o.scenario.empty()) {
        const ScenarioConfig cfg = load_scenario(o.scenario, overrides(o));
        sel = cfg.selection;
        radio = cfg.radio;
        gravity = cfg.gravity;
    } else if (!o.sets.empty()) {
        throw UsageError("--set needs --scenario");
    }

    const std::vector<OrbitalElements> users = load_tle_file(o.tle);
    const std::vector<OrbitalElements> relays = load_tle_file(o.relays);
    if (users.empty()) throw EmptyInput("no element sets in " + o.tle);
    auto user = users.begin();
    if (o.user >= 0) {
        user = std::find_if(users.begin(), users.end(), [&](const OrbitalElements& e) { return e.catalog_id == o.user; });
        if (user == users.end()) throw UsageError("catalog id " + std::to_string(o.user) + " not in " + o.tle);
    }
    const UtcTime start = o.start.empty() ? latest_epoch(users, relays) : parse_utc(o.start);
    const UtcTime end = add_seconds(start, window_s);

    const SelectionTrace trace = selection_trace(*user, relays, start, end, o.step, strategy, sel, radio, gravity);
    const TraceSummary summary = summarize_trace(trace, strategy, sel.v_ground_kms);

    std::ostringstream rows, cdf;
    write_trace_csv(rows, trace);
    write_trace_cdf_csv(cdf, summary);
    OutputBundle bundle(output_dir(o));
    bundle.add("trace.csv", rows.str());
    bundle.add("trace_cdf.csv", cdf.str());
    bundle.add("trace_summary.json", trace_summary_json(summary));
    bundle.commit();

    out << std::fixed << std::setprecision(3) << "trace " << user->name << " strategy=" << summary.strategy
        << " rows=" << summary.rows << " connected=" << summary.connected_rows
        << " max_speed_kms=" << summary.max_relative_speed_kms
        << " avg_connection_s=" << summary.average_connection_time_s << '\n';
    return kOk;
}

void print_summary(std::ostream& out, const std::string& label, const SimulationSummary& s) {
    out << std::fixed << std::setprecision(3) << label << ": users=" << s.users << " sessions=" << s.sessions
        << " median_backlog_gb=" << s.median_backlog_bits / kBitsPerGigabyte
        << " p90_backlog_gb=" << s.p90_backlog_bits / kBitsPerGigabyte
        << " delivered_fraction=" << s.delivered_fraction << " switches=" << s.total_switches << '\n';
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream&) {
    const ScenarioConfig cfg = load_scenario(o.scenario, overrides(o));
    const SimulationReport report = run_scenario(cfg, o.seed);
    simulation_bundle(report, output_dir(o), !o.no_plan).commit();
    print_summary(out, cfg.name, report.summary);
    return kOk;
}

std::vector<std::string> split_values(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, ',')) {
        if (!cur.empty()) out.push_back(cur);
    }
    if (out.empty()) throw UsageError("--values is empty");
    return out;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream&) {
    if (o.param.empty()) throw UsageError("sweep needs --param");
    const std::vector<std::string> values = split_values(o.values);
    const std::vector<Override> base = overrides(o);

    // Validate every point before running any of them.
    std::vector<ScenarioConfig> configs;
    for (const std::string& v : values) {
        std::vector<Override> ov = base;
        ov.emplace_back(o.param, v);
        configs.push_back(load_scenario(o.scenario, ov));
    }

    OutputBundle bundle(output_dir(o));
    std::ostringstream table;
    table << "param,value,median_backlog_bits,p90_backlog_bits,delivered_bits,delivered_fraction,switches\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        const SimulationReport report = run_scenario(configs[i], o.seed);
        const SimulationSummary& s = report.summary;
        table << o.param << ',' << values[i] << ',' << csv::num(s.median_backlog_bits) << ','
              << csv::num(s.p90_backlog_bits) << ',' << s.total_delivered_bits << ',' << csv::fixed(s.delivered_fraction, 6)
              << ',' << s.total_switches << '\n';
        const OutputBundle run = simulation_bundle(report, "unused", !o.no_plan);
        for (const auto& [name, content] : run.files()) {
            bundle.add("runs/" + std::to_string(i) + "/" + name, content);
        }
        print_summary(out, o.param + "=" + values[i], s);
    }
    bundle.add("sweep.csv", table.str());
    bundle.commit();
    return kOk;
}

int cmd_report(const Options& o, std::ostream& out, std::ostream&) {
    if (o.inputs.empty()) throw UsageError("report needs at least one --in bundle");
    std::ostringstream table;
    table << "bundle,users,median_backlog_bits,p90_backlog_bits,delivered_bits,delivered_fraction,switches,"
             "median_vs_first\n";
    double first = 0.0;
    for (std::size_t i = 0; i < o.inputs.size(); ++i) {
        const std::vector<BacklogLedger> ledgers = read_ledger_csv(fs::path(o.inputs[i]) / "ledger.csv");
        const SimulationSummary s = summarize(ledgers);
        if (i == 0) first = s.median_backlog_bits;
        const double ratio = first > 0.0 ? s.median_backlog_bits / first : 0.0;
        table << o.inputs[i] << ',' << s.users << ',' << csv::num(s.median_backlog_bits) << ','
              << csv::num(s.p90_backlog_bits) << ',' << s.total_delivered_bits << ','
              << csv::fixed(s.delivered_fraction, 6) << ',' << s.total_switches << ',' << csv::fixed(ratio, 6) << '\n';
    }
    out << table.str();
    if (!o.out.empty() || std::getenv(kOutDirEnv) != nullptr) {
        OutputBundle bundle(output_dir(o));
        bundle.add("report.csv", table.str());
        bundle.commit();
    }
    return kOk;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Space-user relay scheduling simulator"};
    app.name("ssu");
    app.require_subcommand(1);
    Options o;

    auto* validate = app.add_subcommand("validate-tle", "Parse a TLE file and report rejected records");
    validate->add_option("--tle", o.tle, "TLE file")->required();

    auto* density = app.add_subcommand("density", "Relay density grid at one epoch");
    density->add_option("--tle", o.tle, "TLE file")->required();
    density->add_option("--cell-size", o.cell_size, "Cell size in degrees (divides 180)");
    density->add_option("--epoch", o.epoch, "UTC epoch, default the latest element epoch");
    density->add_option("--out", o.out, "Output directory");

    auto* trace = app.add_subcommand("trace-selection", "Relay choice for one user over a window");
    trace->add_option("--tle", o.tle, "User TLE file")->required();
    trace->add_option("--relays", o.relays, "Relay TLE file")->required();
    trace->add_option("--user", o.user, "User catalog id, default the first record");
    trace->add_option("--strategy", o.strategy, "dual, nearest, min_v_in_radius or vg_only");
    trace->add_option("--window", o.window, "Window length: seconds or with an s/m/h suffix");
    trace->add_option("--step", o.step, "Step in seconds");
    trace->add_option("--start", o.start, "UTC start, default the latest element epoch");
    trace->add_option("--scenario", o.scenario, "Take selection and radio settings from a scenario");
    trace->add_option("--set", o.sets, "Scenario override key=value");
    trace->add_option("--out", o.out, "Output directory");

    auto* simulate = app.add_subcommand("simulate", "Run one scenario");
    simulate->add_option("--scenario", o.scenario, "Scenario JSON")->required();
    simulate->add_option("--seed", o.seed, "Random seed");
    simulate->add_option("--set", o.sets, "Override key=value (repeatable)");
    simulate->add_option("--out", o.out, "Output directory");
    simulate->add_flag("--no-plan", o.no_plan, "Skip plan.csv");

    auto* sweep = app.add_subcommand("sweep", "Run a scenario over values of one parameter");
    sweep->add_option("--scenario", o.scenario, "Scenario JSON")->required();
    sweep->add_option("--param", o.param, "Dotted scenario key")->required();
    sweep->add_option("--values", o.values, "Comma separated values")->required();
    sweep->add_option("--seed", o.seed, "Random seed");
    sweep->add_option("--set", o.sets, "Override key=value (repeatable)");
    sweep->add_option("--out", o.out, "Output directory");
    sweep->add_flag("--no-plan", o.no_plan, "Skip plan.csv");

    auto* report = app.add_subcommand("report", "Compare simulation bundles");
    report->add_option("--in", o.inputs, "Bundle directory (repeatable)")->required();
    report->add_option("--out", o.out, "Write report.csv here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (validate->parsed()) return cmd_validate_tle(o, out, err);
        if (density->parsed()) return cmd_density(o, out, err);
        if (trace->parsed()) return cmd_trace_selection(o, out, err);
        if (simulate->parsed()) return cmd_simulate(o, out, err);
        if (sweep->parsed()) return cmd_sweep(o, out, err);
        if (report->parsed()) return cmd_report(o, out, err);
        return kUsage;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const TleFileError& e) {
        err << e.what() << '\n';
        for (const TleDiagnostic& d : e.diagnostics()) err << "  " << to_string(d) << '\n';
        return kIngest;
    } catch (const IngestError& e) {
        err << "input error: " << e.what() << '\n';
        return kIngest;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntime;
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<std::string> storage;
    storage.reserve(args.size() + 1);
    storage.emplace_back("ssu");
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (std::string& s : storage) argv.push_back(s.data());
    argv.push_back(nullptr);
    return run(static_cast<int>(storage.size()), argv.data(), out, err);
}

}  // namespace ssu::cli
