#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ssu/error.hpp"
#include "ssu/link_quality.hpp"
#include "ssu/sgp4.hpp"
#include "ssu/time.hpp"

namespace ssu {

enum class WeatherClass { Clear, Cloud, Rain, Snow };

const char* to_string(WeatherClass w);
WeatherClass parse_weather_class(std::string_view name);

struct WeatherTerms {
    double loss_rate = 0.0;
    double delay_ms = 0.0;
};

struct PopProfile {
    std::string pop_id;
    double lat_deg = 0.0;
    double lon_deg = 0.0;
    /// Ground footprint reachable without inter-satellite hops, km.
    double serving_radius_km = 0.0;
    std::map<WeatherClass, WeatherTerms> weather;
    std::map<Tier, double> tier_rates_bps;
};

class UnknownWeatherClass : public Error {
public:
    UnknownWeatherClass(const std::string& pop_id, WeatherClass w);
};

class UnknownTier : public Error {
public:
    UnknownTier(const std::string& pop_id, Tier t);
};

class NoPopAvailable : public Error {
public:
    NoPopAvailable() : Error("no PoP profiles available") {}
};

inline constexpr int kPopProfileSchemaVersion = 1;

/// JSON document {"schema": "ssu-pop-profiles", "version": 1, "pops": [...]}.
/// Empty input yields no profiles. Throws SchemaViolation.
std::vector<PopProfile> parse_pop_profiles(std::string_view text);
std::vector<PopProfile> load_pop_profiles(const std::filesystem::path& path);

/// Weather classes per location over time, from rows of
/// (location_id, epoch_utc, weather_class). The class at time t is the
/// latest row at or before t; locations or times without data are clear.
class WeatherTrace {
public:
    WeatherTrace() = default;

    static WeatherTrace parse(std::string_view csv_text);
    static WeatherTrace load(const std::filesystem::path& path);

    void add(const std::string& location_id, UtcTime at, WeatherClass w);
    WeatherClass at(const std::string& location_id, UtcTime t) const;
    bool empty() const noexcept { return rows_.empty(); }

private:
    std::map<std::string, std::map<UtcTime, WeatherClass>> rows_;
};

struct IslModel {
    double loss_per_km = 0.0035 / 2100.0;
    double delay_ms_per_km = 1000.0 / 299'792.458;

    void validate() const;
};

struct RouteQuality {
    double loss_rate = 0.0;
    double delay_ms = 0.0;
    double snr_db = 0.0;
    double deliverable_bits = 0.0;  // per session
};

/// Loss and delay of a PoP under `weather` plus an ISL span of `isl_km`.
/// snr_db is left at zero; callers that know the radio geometry fill it in.
RouteQuality pop_route_quality(const PopProfile& profile, WeatherClass weather, Tier tier, double isl_km,
                               const IslModel& isl, double session_seconds);

struct RouteChoice {
    std::string pop_id;
    std::size_t pop_index = 0;
    double isl_km = 0.0;
    RouteQuality quality;
};

struct RouteOptions {
    Tier tier = Tier::Business;
    /// Doppler the user's receiver pre-compensates, km/s.
    double doppler_compensation_kms = 0.0;
};

/// Best PoP for traffic relayed by `relay` from `user`. The relay is
/// projected onto its ground subpoint; each PoP is charged its local
/// weather plus the ISL span from that subpoint to the edge of the PoP's
/// serving radius. The winner maximizes deliverable bits, then minimizes
/// delay, then orders by pop_id. When the user-relay link is unusable the
/// route is still reported with zero deliverable bits and snr_db = -inf.
RouteChoice space_user_route(const StateVector& user, const StateVector& relay, const std::vector<PopProfile>& pops,
                             const WeatherTrace& weather, const RadioConfig& radio, const IslModel& isl,
                             const RouteOptions& opts = {});

/// Same ranking from a precomputed relay subpoint and link SNR.
RouteChoice best_pop_route(double relay_lat_deg, double relay_lon_deg, UtcTime at, std::optional<double> snr_db,
                           const std::vector<PopProfile>& pops, const WeatherTrace& weather, Tier tier,
                           const IslModel& isl, double session_seconds);

}  // namespace ssu
