#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "ssu/error.hpp"
#include "ssu/geometry.hpp"

namespace ssu {

inline constexpr double kSpeedOfLightMps = 299'792'458.0;

enum class Tier { Standard, Roam, Priority, Business };

const char* to_string(Tier t);
/// Accepts the lower-case names ("standard", "roam", "priority", "business").
Tier parse_tier(std::string_view name);

/// Which speed drives the Doppler offset of a space-to-space link.
enum class DopplerSource { RelativeSpeed, RangeRate };

struct RadioConfig {
    double carrier_freq_hz = 12e9;
    double subcarrier_spacing_hz = 240e3;
    double ec_n0_ref_db = 20.0;
    double ref_distance_km = 550.0;
    double session_seconds = 15.0;
    DopplerSource doppler_source = DopplerSource::RelativeSpeed;

    void validate() const;
};

class NonPositiveInput : public Error {
public:
    using Error::Error;
};

class EpsilonOutOfRange : public Error {
public:
    explicit EpsilonOutOfRange(double epsilon);
    double epsilon() const noexcept { return epsilon_; }

private:
    double epsilon_;
};

/// Free-space path loss in dB.
double fspl_db(double distance_km, double freq_hz);

/// Lower bound of the post-FFT SNR under a normalized carrier frequency
/// offset `epsilon` (linear in, linear out). Requires |epsilon| < 0.5.
double cfo_snr(double ec_n0_linear, double epsilon);

/// Normalized CFO for a line-of-sight speed in km/s.
double doppler_epsilon(double speed_kms, const RadioConfig& radio);

/// Ec/N0 at `distance_km`, translated from the reference distance by the
/// path loss difference.
double ec_n0_db_at(double distance_km, const RadioConfig& radio);

/// Speed left after the receiver compensates `compensation_kms` of Doppler.
double residual_doppler_speed(const GeometrySample& g, DopplerSource source, double compensation_kms);

/// Post-CFO SNR in dB for a link, or nullopt when the residual offset leaves
/// the range where the SNR bound holds (the link is interference-limited).
std::optional<double> link_snr_db(double distance_km, double residual_speed_kms, const RadioConfig& radio);

double db_to_linear(double db);
double linear_to_db(double linear);

}  // namespace ssu
