#include "ssu/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ssu {

using nlohmann::json;

const char* to_string(SelectionMode m) {
    switch (m) {
        case SelectionMode::Dual: return "dual";
        case SelectionMode::Nearest: return "nearest";
        case SelectionMode::MinVelocityInRadius: return "min_v_in_radius";
        case SelectionMode::RandomAmongSelected: return "random_among_selected";
        case SelectionMode::VgOnly: return "vg_only";
    }
    return "?";
}

SelectionMode parse_selection_mode(std::string_view name) {
    if (name == "dual") return SelectionMode::Dual;
    if (name == "nearest") return SelectionMode::Nearest;
    if (name == "min_v_in_radius") return SelectionMode::MinVelocityInRadius;
    if (name == "random_among_selected") return SelectionMode::RandomAmongSelected;
    if (name == "vg_only") return SelectionMode::VgOnly;
    throw ConfigError("unknown selection mode '" + std::string(name) + "'");
}

std::vector<GroundStation> WaitAndTransferConfig::default_stations() {
    return {
        {"seattle", 47.61, -122.33, 0.0},  {"new_york", 40.71, -74.01, 0.0}, {"dallas", 32.78, -96.80, 0.0},
        {"frankfurt", 50.11, 8.68, 0.0},   {"lagos", 6.52, 3.38, 0.0},
    };
}

void WaitAndTransferConfig::validate() const {
    if (stations.empty()) throw ConfigError("baseline.stations must not be empty");
    for (const GroundStation& s : stations) {
        if (std::fabs(s.lat_deg) > 90.0) throw ConfigError("baseline station '" + s.name + "' latitude out of range");
    }
    if (!(min_elevation_deg > 0.0 && min_elevation_deg < 90.0)) {
        throw ConfigError("baseline.min_elevation_deg must lie in (0, 90)");
    }
    if (!(contact_rate_bps >= 0.0)) throw ConfigError("baseline.contact_rate_bps must be >= 0");
}

void ScenarioConfig::validate() const {
    if (!(duration_hours > 0.0)) throw ConfigError("duration_hours must be positive");
    if (session_seconds <= 0) throw ConfigError("session_seconds must be a positive integer");
    if (eo_multiplier < 1) throw ConfigError("eo_multiplier must be >= 1");
    if (!(availability_fraction >= 0.0 && availability_fraction <= 1.0)) {
        throw ConfigError("availability_fraction must lie in [0, 1]");
    }
    if (!(switch_penalty >= 0.0 && switch_penalty < 1.0)) throw ConfigError("switch_penalty must lie in [0, 1)");
    if (relay_capacity < 0) throw ConfigError("relay_capacity must be >= 0");
    if (eo_tles.empty()) throw ConfigError("eo_tles is required");
    if (!baseline) {
        if (relay_tles.empty()) throw ConfigError("relay_tles is required");
        if (pop_profiles.empty()) throw ConfigError("pop_profiles is required");
    }
    selection.validate();
    radio.validate();
    isl.validate();
    if (baseline) baseline->validate();
}

std::size_t ScenarioConfig::session_count() const {
    return static_cast<std::size_t>(std::floor(duration_hours * 3600.0 / session_seconds + 1e-9));
}

Override parse_override(std::string_view kv) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        throw ConfigError("override '" + std::string(kv) + "' is not key=value");
    }
    return {std::string(kv.substr(0, eq)), std::string(kv.substr(eq + 1))};
}

namespace {

const std::set<std::string> kPathKeys = {"eo_tles", "relay_tles", "pop_profiles", "weather_trace"};

class Reader {
public:
    Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) throw SchemaViolation(path_, "expected an object");
    }

    void only(std::initializer_list<const char*> keys) const {
        for (const auto& [key, value] : obj_.items()) {
            if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
                throw SchemaViolation(path_ + "." + key, "unknown key");
            }
        }
    }

    bool has(const char* key) const { return obj_.contains(key); }
    std::string at(const char* key) const { return path_ + "." + key; }
    const json& raw(const char* key) const { return obj_.at(key); }

    void number(const char* key, double& out) const {
        if (!has(key)) return;
        const json& v = obj_.at(key);
        if (!v.is_number()) throw SchemaViolation(at(key), "expected a number");
        out = v.get<double>();
        if (!std::isfinite(out)) throw SchemaViolation(at(key), "not finite");
    }

    void integer(const char* key, int& out) const {
        if (!has(key)) return;
        double d = 0.0;
        number(key, d);
        if (d != std::floor(d) || std::fabs(d) > 2e9) throw SchemaViolation(at(key), "expected an integer");
        out = static_cast<int>(d);
    }

    void count(const char* key, std::uint64_t& out) const {
        if (!has(key)) return;
        double d = 0.0;
        number(key, d);
        if (d < 0.0 || d != std::floor(d) || d > 9e18) throw SchemaViolation(at(key), "expected a whole number >= 0");
        out = static_cast<std::uint64_t>(d);
    }

    void boolean(const char* key, bool& out) const {
        if (!has(key)) return;
        if (!obj_.at(key).is_boolean()) throw SchemaViolation(at(key), "expected true or false");
        out = obj_.at(key).get<bool>();
    }

    std::optional<std::string> text(const char* key) const {
        if (!has(key)) return std::nullopt;
        if (!obj_.at(key).is_string()) throw SchemaViolation(at(key), "expected a string");
        return obj_.at(key).get<std::string>();
    }

    template <class Parse>
    void choice(const char* key, Parse parse) const {
        if (auto s = text(key)) {
            try {
                parse(*s);
            } catch (const ConfigError& e) {
                throw SchemaViolation(at(key), e.what());
            }
        }
    }

private:
    const json& obj_;
    std::string path_;
};

void apply_override(json& doc, const Override& o) {
    json* node = &doc;
    std::string_view key = o.first;
    while (true) {
        const std::size_t dot = key.find('.');
        const std::string part(key.substr(0, dot));
        if (part.empty()) throw ConfigError("override key '" + o.first + "' has an empty segment");
        if (dot == std::string_view::npos) {
            json value;
            try {
                value = json::parse(o.second);
            } catch (const json::parse_error&) {
                value = o.second;
            }
            (*node)[part] = value;
            return;
        }
        if (!node->contains(part)) (*node)[part] = json::object();
        node = &(*node)[part];
        if (!node->is_object()) throw ConfigError("override key '" + o.first + "' descends into a non-object");
        key.remove_prefix(dot + 1);
    }
}

GravityModel parse_gravity(std::string_view s) {
    if (s == "wgs72") return GravityModel::Wgs72;
    if (s == "wgs72old") return GravityModel::Wgs72Old;
    if (s == "wgs84") return GravityModel::Wgs84;
    throw ConfigError("unknown gravity model '" + std::string(s) + "'");
}

const char* gravity_name(GravityModel g) {
    switch (g) {
        case GravityModel::Wgs72: return "wgs72";
        case GravityModel::Wgs72Old: return "wgs72old";
        case GravityModel::Wgs84: return "wgs84";
    }
    return "?";
}

ScenarioConfig from_json(const json& doc, const std::filesystem::path& base_dir,
                         const std::set<std::string>& cwd_paths) {
    Reader r(doc, "$");
    r.only({"version", "name", "duration_hours", "session_seconds", "generation_rate_bits_per_day",
            "initial_backlog_bits", "start_epoch", "eo_tles", "relay_tles", "pop_profiles", "weather_trace",
            "eo_multiplier", "availability_fraction", "polar_outage", "selection_mode", "tier", "switch_penalty",
            "penalty_mode", "relay_capacity", "gravity", "selection", "radio", "isl", "baseline"});
    int version = 0;
    r.integer("version", version);
    if (version != kScenarioSchemaVersion) throw SchemaViolation("$.version", "unsupported or missing version");

    ScenarioConfig c;
    if (auto s = r.text("name")) c.name = *s;
    r.number("duration_hours", c.duration_hours);
    r.integer("session_seconds", c.session_seconds);
    r.count("generation_rate_bits_per_day", c.generation_rate_bits_per_day);
    r.count("initial_backlog_bits", c.initial_backlog_bits);
    r.choice("start_epoch", [&](const std::string& s) { c.start_epoch = parse_utc(s); });
    for (const std::string& key : kPathKeys) {
        if (auto s = r.text(key.c_str())) {
            std::filesystem::path p(*s);
            if (p.is_relative() && !cwd_paths.contains(key)) p = base_dir / p;
            if (key == "eo_tles") c.eo_tles = p;
            if (key == "relay_tles") c.relay_tles = p;
            if (key == "pop_profiles") c.pop_profiles = p;
            if (key == "weather_trace") c.weather_trace = p;
        }
    }
    r.integer("eo_multiplier", c.eo_multiplier);
    r.number("availability_fraction", c.availability_fraction);
    r.boolean("polar_outage", c.polar_outage);
    r.choice("selection_mode", [&](const std::string& s) { c.selection_mode = parse_selection_mode(s); });
    r.choice("tier", [&](const std::string& s) { c.tier = parse_tier(s); });
    r.number("switch_penalty", c.switch_penalty);
    r.choice("penalty_mode", [&](const std::string& s) {
        if (s == "new_links") c.penalty_mode = PenaltyMode::NewLinksOnly;
        else if (s == "all_links") c.penalty_mode = PenaltyMode::AllLinks;
        else throw ConfigError("expected new_links or all_links");
    });
    r.integer("relay_capacity", c.relay_capacity);
    r.choice("gravity", [&](const std::string& s) { c.gravity = parse_gravity(s); });

    if (r.has("selection")) {
        Reader s(r.raw("selection"), "$.selection");
        s.only({"v_ground_kms", "v_ground_max_kms", "v_critical_kms", "search_radius_km", "low_velocity_target_kms",
                "outside_disconnect_speed_kms", "inside_ranking", "ssdb_boundary_lat_deg"});
        SelectionConfig& sc = c.selection;
        s.number("v_ground_kms", sc.v_ground_kms);
        s.number("v_ground_max_kms", sc.v_ground_max_kms);
        if (s.has("v_critical_kms") && !s.raw("v_critical_kms").is_null()) {
            double v = 0.0;
            s.number("v_critical_kms", v);
            sc.v_critical_kms = v;
        }
        s.number("search_radius_km", sc.search_radius_km);
        s.number("low_velocity_target_kms", sc.low_velocity_target_kms);
        s.number("outside_disconnect_speed_kms", sc.outside_disconnect_speed_kms);
        s.choice("inside_ranking", [&](const std::string& v) {
            if (v == "preference") sc.inside_ranking = InsideRanking::PreferenceMetric;
            else if (v == "pure") sc.inside_ranking = InsideRanking::PureRule;
            else throw ConfigError("expected preference or pure");
        });
        s.number("ssdb_boundary_lat_deg", sc.ssdb.boundary_lat_deg);
    }
    if (r.has("radio")) {
        Reader s(r.raw("radio"), "$.radio");
        s.only({"carrier_freq_hz", "subcarrier_spacing_hz", "ec_n0_ref_db", "ref_distance_km", "doppler_source"});
        s.number("carrier_freq_hz", c.radio.carrier_freq_hz);
        s.number("subcarrier_spacing_hz", c.radio.subcarrier_spacing_hz);
        s.number("ec_n0_ref_db", c.radio.ec_n0_ref_db);
        s.number("ref_distance_km", c.radio.ref_distance_km);
        s.choice("doppler_source", [&](const std::string& v) {
            if (v == "relative_speed") c.radio.doppler_source = DopplerSource::RelativeSpeed;
            else if (v == "range_rate") c.radio.doppler_source = DopplerSource::RangeRate;
            else throw ConfigError("expected relative_speed or range_rate");
        });
    }
    c.radio.session_seconds = c.session_seconds;
    if (r.has("isl")) {
        Reader s(r.raw("isl"), "$.isl");
        s.only({"loss_per_km", "delay_ms_per_km"});
        s.number("loss_per_km", c.isl.loss_per_km);
        s.number("delay_ms_per_km", c.isl.delay_ms_per_km);
    }
    if (r.has("baseline") && !r.raw("baseline").is_null()) {
        Reader s(r.raw("baseline"), "$.baseline");
        s.only({"stations", "min_elevation_deg", "contact_rate_bps"});
        WaitAndTransferConfig w;
        if (s.has("stations")) {
            const json& arr = s.raw("stations");
            if (!arr.is_array()) throw SchemaViolation("$.baseline.stations", "expected an array");
            w.stations.clear();
            for (std::size_t i = 0; i < arr.size(); ++i) {
                const std::string p = "$.baseline.stations[" + std::to_string(i) + "]";
                Reader st(arr[i], p);
                st.only({"name", "lat", "lon", "alt_km"});
                GroundStation g;
                g.name = st.text("name").value_or("station-" + std::to_string(i));
                if (!st.has("lat") || !st.has("lon")) throw SchemaViolation(p, "lat and lon are required");
                st.number("lat", g.lat_deg);
                st.number("lon", g.lon_deg);
                st.number("alt_km", g.alt_km);
                w.stations.push_back(g);
            }
        }
        s.number("min_elevation_deg", w.min_elevation_deg);
        s.number("contact_rate_bps", w.contact_rate_bps);
        c.baseline = w;
    }
    c.validate();
    return c;
}

}  // namespace

ScenarioConfig parse_scenario(std::string_view json_text, const std::filesystem::path& base_dir,
                              const std::vector<Override>& overrides) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw SchemaViolation("$", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw SchemaViolation("$", "expected an object");
    std::set<std::string> cwd_paths;
    for (const Override& o : overrides) {
        apply_override(doc, o);
        if (kPathKeys.contains(o.first)) cwd_paths.insert(o.first);
    }
    return from_json(doc, base_dir, cwd_paths);
}

ScenarioConfig load_scenario(const std::filesystem::path& path, const std::vector<Override>& overrides) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open scenario file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), path.parent_path(), overrides);
}

std::string scenario_to_json(const ScenarioConfig& c) {
    json j;
    j["version"] = kScenarioSchemaVersion;
    j["name"] = c.name;
    j["duration_hours"] = c.duration_hours;
    j["session_seconds"] = c.session_seconds;
    j["generation_rate_bits_per_day"] = c.generation_rate_bits_per_day;
    j["initial_backlog_bits"] = c.initial_backlog_bits;
    if (c.start_epoch) j["start_epoch"] = format_utc(*c.start_epoch);
    j["eo_tles"] = c.eo_tles.filename().string();
    if (!c.relay_tles.empty()) j["relay_tles"] = c.relay_tles.filename().string();
    if (!c.pop_profiles.empty()) j["pop_profiles"] = c.pop_profiles.filename().string();
    if (!c.weather_trace.empty()) j["weather_trace"] = c.weather_trace.filename().string();
    j["eo_multiplier"] = c.eo_multiplier;
    j["availability_fraction"] = c.availability_fraction;
    j["polar_outage"] = c.polar_outage;
    j["selection_mode"] = to_string(c.selection_mode);
    j["tier"] = to_string(c.tier);
    j["switch_penalty"] = c.switch_penalty;
    j["penalty_mode"] = c.penalty_mode == PenaltyMode::NewLinksOnly ? "new_links" : "all_links";
    j["relay_capacity"] = c.relay_capacity;
    j["gravity"] = gravity_name(c.gravity);
    const SelectionConfig& s = c.selection;
    j["selection"] = {{"v_ground_kms", s.v_ground_kms},
                      {"v_ground_max_kms", s.v_ground_max_kms},
                      {"v_critical_kms", s.v_critical(c.radio)},
                      {"search_radius_km", s.search_radius_km},
                      {"low_velocity_target_kms", s.low_velocity_target_kms},
                      {"outside_disconnect_speed_kms", s.outside_disconnect_speed_kms},
                      {"inside_ranking", s.inside_ranking == InsideRanking::PreferenceMetric ? "preference" : "pure"},
                      {"ssdb_boundary_lat_deg", s.ssdb.boundary_lat_deg}};
    j["radio"] = {{"carrier_freq_hz", c.radio.carrier_freq_hz},
                  {"subcarrier_spacing_hz", c.radio.subcarrier_spacing_hz},
                  {"ec_n0_ref_db", c.radio.ec_n0_ref_db},
                  {"ref_distance_km", c.radio.ref_distance_km},
                  {"doppler_source",
                   c.radio.doppler_source == DopplerSource::RelativeSpeed ? "relative_speed" : "range_rate"}};
    j["isl"] = {{"loss_per_km", c.isl.loss_per_km}, {"delay_ms_per_km", c.isl.delay_ms_per_km}};
    if (c.baseline) {
        json st = json::array();
        for (const GroundStation& g : c.baseline->stations) {
            st.push_back({{"name", g.name}, {"lat", g.lat_deg}, {"lon", g.lon_deg}, {"alt_km", g.alt_km}});
        }
        j["baseline"] = {{"stations", st},
                         {"min_elevation_deg", c.baseline->min_elevation_deg},
                         {"contact_rate_bps", c.baseline->contact_rate_bps}};
    }
    return j.dump(2);
}

}  // namespace ssu
