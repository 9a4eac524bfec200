#include "ssu/pop_profiles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ssu/csv.hpp"
#include "ssu/earth.hpp"

namespace ssu {

using nlohmann::json;

const char* to_string(WeatherClass w) {
    switch (w) {
        case WeatherClass::Clear: return "clear";
        case WeatherClass::Cloud: return "cloud";
        case WeatherClass::Rain: return "rain";
        case WeatherClass::Snow: return "snow";
    }
    return "?";
}

WeatherClass parse_weather_class(std::string_view name) {
    if (name == "clear") return WeatherClass::Clear;
    if (name == "cloud") return WeatherClass::Cloud;
    if (name == "rain") return WeatherClass::Rain;
    if (name == "snow") return WeatherClass::Snow;
    throw ConfigError("unknown weather class '" + std::string(name) + "'");
}

UnknownWeatherClass::UnknownWeatherClass(const std::string& pop_id, WeatherClass w)
    : Error("PoP '" + pop_id + "' has no profile for weather '" + to_string(w) + "'") {}

UnknownTier::UnknownTier(const std::string& pop_id, Tier t)
    : Error("PoP '" + pop_id + "' has no rate for tier '" + to_string(t) + "'") {}

namespace {

void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw SchemaViolation(path, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
            throw SchemaViolation(path + "." + key, "unknown field");
        }
    }
}

double number_at(const json& obj, const std::string& path, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw SchemaViolation(path + "." + key, "missing");
    if (!it->is_number()) throw SchemaViolation(path + "." + key, "expected a number");
    const double v = it->get<double>();
    if (!std::isfinite(v)) throw SchemaViolation(path + "." + key, "not finite");
    return v;
}

PopProfile parse_profile(const json& p, const std::string& path) {
    only_keys(p, path, {"pop_id", "lat", "lon", "serving_radius_km", "weather", "tier_rates_bps"});
    PopProfile out;
    const auto id = p.find("pop_id");
    if (id == p.end() || !id->is_string() || id->get<std::string>().empty()) {
        throw SchemaViolation(path + ".pop_id", "expected a non-empty string");
    }
    out.pop_id = id->get<std::string>();
    out.lat_deg = number_at(p, path, "lat");
    out.lon_deg = number_at(p, path, "lon");
    if (std::fabs(out.lat_deg) > 90.0) throw SchemaViolation(path + ".lat", "outside [-90, 90]");
    if (std::fabs(out.lon_deg) > 180.0) throw SchemaViolation(path + ".lon", "outside [-180, 180]");
    out.serving_radius_km = p.contains("serving_radius_km") ? number_at(p, path, "serving_radius_km") : 0.0;
    if (out.serving_radius_km < 0.0) throw SchemaViolation(path + ".serving_radius_km", "negative");

    const auto weather = p.find("weather");
    if (weather == p.end() || !weather->is_object() || weather->empty()) {
        throw SchemaViolation(path + ".weather", "expected a non-empty object");
    }
    for (const auto& [name, terms] : weather->items()) {
        const std::string wpath = path + ".weather." + name;
        WeatherClass w;
        try {
            w = parse_weather_class(name);
        } catch (const ConfigError&) {
            throw SchemaViolation(wpath, "unknown weather class");
        }
        only_keys(terms, wpath, {"loss_rate", "delay_ms"});
        WeatherTerms t{number_at(terms, wpath, "loss_rate"), number_at(terms, wpath, "delay_ms")};
        if (t.loss_rate < 0.0 || t.loss_rate >= 1.0) throw SchemaViolation(wpath + ".loss_rate", "outside [0, 1)");
        if (!(t.delay_ms > 0.0)) throw SchemaViolation(wpath + ".delay_ms", "must be positive");
        out.weather[w] = t;
    }
    if (!out.weather.contains(WeatherClass::Clear)) {
        throw SchemaViolation(path + ".weather.clear", "missing");
    }

    const auto rates = p.find("tier_rates_bps");
    if (rates == p.end() || !rates->is_object()) throw SchemaViolation(path + ".tier_rates_bps", "expected an object");
    for (const auto& [name, value] : rates->items()) {
        const std::string rpath = path + ".tier_rates_bps." + name;
        Tier t;
        try {
            t = parse_tier(name);
        } catch (const ConfigError&) {
            throw SchemaViolation(rpath, "unknown tier");
        }
        if (!value.is_number() || !(value.get<double>() >= 0.0)) throw SchemaViolation(rpath, "expected a rate >= 0");
        out.tier_rates_bps[t] = value.get<double>();
    }
    return out;
}

}  // namespace

std::vector<PopProfile> parse_pop_profiles(std::string_view text) {
    if (std::all_of(text.begin(), text.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); })) {
        return {};
    }
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaViolation("$", std::string("invalid JSON: ") + e.what());
    }
    only_keys(doc, "$", {"schema", "version", "pops"});
    if (!doc.contains("schema") || doc["schema"] != "ssu-pop-profiles") {
        throw SchemaViolation("$.schema", "expected \"ssu-pop-profiles\"");
    }
    if (!doc.contains("version") || !doc["version"].is_number_integer() ||
        doc["version"].get<int>() != kPopProfileSchemaVersion) {
        throw SchemaViolation("$.version", "unsupported version");
    }
    std::vector<PopProfile> out;
    if (!doc.contains("pops")) return out;
    if (!doc["pops"].is_array()) throw SchemaViolation("$.pops", "expected an array");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < doc["pops"].size(); ++i) {
        PopProfile p = parse_profile(doc["pops"][i], "$.pops[" + std::to_string(i) + "]");
        if (!seen.insert(p.pop_id).second) {
            throw SchemaViolation("$.pops[" + std::to_string(i) + "].pop_id", "duplicate id '" + p.pop_id + "'");
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<PopProfile> load_pop_profiles(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open PoP profile file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_pop_profiles(ss.str());
}

WeatherTrace WeatherTrace::parse(std::string_view csv_text) {
    WeatherTrace trace;
    const auto rows = csv::parse(csv_text);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (i == 0 && !r.empty() && r[0] == "location_id") continue;
        const std::string where = "weather row " + std::to_string(i + 1);
        if (r.size() != 3) throw SchemaViolation(where, "expected location_id,epoch_utc,weather_class");
        try {
            trace.add(r[0], parse_utc(r[1]), parse_weather_class(r[2]));
        } catch (const ConfigError& e) {
            throw SchemaViolation(where, e.what());
        }
    }
    return trace;
}

WeatherTrace WeatherTrace::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open weather trace " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

void WeatherTrace::add(const std::string& location_id, UtcTime at, WeatherClass w) { rows_[location_id][at] = w; }

WeatherClass WeatherTrace::at(const std::string& location_id, UtcTime t) const {
    const auto loc = rows_.find(location_id);
    if (loc == rows_.end()) return WeatherClass::Clear;
    auto it = loc->second.upper_bound(t);
    if (it == loc->second.begin()) return WeatherClass::Clear;
    return std::prev(it)->second;
}

void IslModel::validate() const {
    if (!(loss_per_km >= 0.0)) throw ConfigError("isl.loss_per_km must be >= 0");
    if (!(delay_ms_per_km >= 0.0)) throw ConfigError("isl.delay_ms_per_km must be >= 0");
}

RouteQuality pop_route_quality(const PopProfile& profile, WeatherClass weather, Tier tier, double isl_km,
                               const IslModel& isl, double session_seconds) {
    const auto w = profile.weather.find(weather);
    if (w == profile.weather.end()) throw UnknownWeatherClass(profile.pop_id, weather);
    const auto rate = profile.tier_rates_bps.find(tier);
    if (rate == profile.tier_rates_bps.end()) throw UnknownTier(profile.pop_id, tier);
    isl_km = std::max(0.0, isl_km);
    RouteQuality q;
    q.loss_rate = std::clamp(w->second.loss_rate + isl_km * isl.loss_per_km, 0.0, std::nextafter(1.0, 0.0));
    q.delay_ms = w->second.delay_ms + isl_km * isl.delay_ms_per_km;
    q.deliverable_bits = std::max(0.0, rate->second * session_seconds * (1.0 - q.loss_rate));
    return q;
}

RouteChoice best_pop_route(double relay_lat_deg, double relay_lon_deg, UtcTime at, std::optional<double> snr_db,
                           const std::vector<PopProfile>& pops, const WeatherTrace& weather, Tier tier,
                           const IslModel& isl, double session_seconds) {
    if (pops.empty()) throw NoPopAvailable();
    std::optional<RouteChoice> best;
    for (std::size_t k = 0; k < pops.size(); ++k) {
        const PopProfile& p = pops[k];
        const double span =
            std::max(0.0, great_circle_km(relay_lat_deg, relay_lon_deg, p.lat_deg, p.lon_deg) - p.serving_radius_km);
        RouteChoice c{p.pop_id, k, span,
                      pop_route_quality(p, weather.at(p.pop_id, at), tier, span, isl, session_seconds)};
        if (snr_db) {
            c.quality.snr_db = *snr_db;
        } else {
            c.quality.snr_db = -std::numeric_limits<double>::infinity();
            c.quality.deliverable_bits = 0.0;
        }
        const bool better =
            !best || c.quality.deliverable_bits > best->quality.deliverable_bits ||
            (c.quality.deliverable_bits == best->quality.deliverable_bits &&
             (c.quality.delay_ms < best->quality.delay_ms ||
              (c.quality.delay_ms == best->quality.delay_ms && c.pop_id < best->pop_id)));
        if (better) best = std::move(c);
    }
    return *best;
}

RouteChoice space_user_route(const StateVector& user, const StateVector& relay, const std::vector<PopProfile>& pops,
                             const WeatherTrace& weather, const RadioConfig& radio, const IslModel& isl,
                             const RouteOptions& opts) {
    const GeometrySample g = geometry(user, relay);
    const Geodetic a = subpoint(relay);
    const double residual = residual_doppler_speed(g, radio.doppler_source, opts.doppler_compensation_kms);
    return best_pop_route(a.lat_deg, a.lon_deg, relay.epoch, link_snr_db(g.distance_km, residual, radio), pops,
                          weather, opts.tier, isl, radio.session_seconds);
}

}  // namespace ssu
