#include "ssu/link_quality.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ssu {

const char* to_string(Tier t) {
    switch (t) {
        case Tier::Standard: return "standard";
        case Tier::Roam: return "roam";
        case Tier::Priority: return "priority";
        case Tier::Business: return "business";
    }
    return "?";
}

Tier parse_tier(std::string_view name) {
    if (name == "standard") return Tier::Standard;
    if (name == "roam") return Tier::Roam;
    if (name == "priority") return Tier::Priority;
    if (name == "business") return Tier::Business;
    throw ConfigError("unknown service tier '" + std::string(name) + "'");
}

void RadioConfig::validate() const {
    if (!(carrier_freq_hz > 0.0)) throw ConfigError("radio.carrier_freq_hz must be positive");
    if (!(subcarrier_spacing_hz > 0.0)) throw ConfigError("radio.subcarrier_spacing_hz must be positive");
    if (!(ref_distance_km > 0.0)) throw ConfigError("radio.ref_distance_km must be positive");
    if (!(session_seconds > 0.0)) throw ConfigError("radio.session_seconds must be positive");
}

EpsilonOutOfRange::EpsilonOutOfRange(double epsilon)
    : Error("normalized CFO " + std::to_string(epsilon) + " is outside (-0.5, 0.5)"), epsilon_(epsilon) {}

double fspl_db(double distance_km, double freq_hz) {
    if (!(distance_km > 0.0) || !(freq_hz > 0.0)) throw NonPositiveInput("path loss needs positive distance and frequency");
    const double d_m = distance_km * 1000.0;
    return 20.0 * std::log10(d_m) + 20.0 * std::log10(freq_hz) +
           20.0 * std::log10(4.0 * std::numbers::pi / kSpeedOfLightMps);
}

double cfo_snr(double ec_n0_linear, double epsilon) {
    if (!(std::fabs(epsilon) < 0.5)) throw EpsilonOutOfRange(epsilon);
    if (epsilon == 0.0) return ec_n0_linear;
    const double x = std::numbers::pi * epsilon;
    const double sinc = std::sin(x) / x;
    const double s = std::sin(x);
    return ec_n0_linear * sinc * sinc / (1.0 + 0.5947 * ec_n0_linear * s * s);
}

double doppler_epsilon(double speed_kms, const RadioConfig& radio) {
    return std::fabs(speed_kms) * 1000.0 / kSpeedOfLightMps * radio.carrier_freq_hz / radio.subcarrier_spacing_hz;
}

double ec_n0_db_at(double distance_km, const RadioConfig& radio) {
    return radio.ec_n0_ref_db - (fspl_db(distance_km, radio.carrier_freq_hz) -
                                 fspl_db(radio.ref_distance_km, radio.carrier_freq_hz));
}

double residual_doppler_speed(const GeometrySample& g, DopplerSource source, double compensation_kms) {
    const double v = source == DopplerSource::RelativeSpeed ? g.relative_speed_kms : std::fabs(g.range_rate_kms);
    return std::fabs(v - compensation_kms);
}

std::optional<double> link_snr_db(double distance_km, double residual_speed_kms, const RadioConfig& radio) {
    const double eps = doppler_epsilon(residual_speed_kms, radio);
    if (!(eps < 0.5)) return std::nullopt;
    // A zero distance (a relay observing itself) is treated as the reference distance.
    const double d = distance_km > 0.0 ? distance_km : radio.ref_distance_km;
    return linear_to_db(cfo_snr(db_to_linear(ec_n0_db_at(d, radio)), eps));
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace ssu
