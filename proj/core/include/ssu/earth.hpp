#pragma once

#include "ssu/sgp4.hpp"
#include "ssu/time.hpp"
#include "ssu/vec3.hpp"

namespace ssu {

namespace wgs84 {
inline constexpr double kSemiMajorKm = 6378.137;
inline constexpr double kFlattening = 1.0 / 298.257223563;
inline constexpr double kEccSq = kFlattening * (2.0 - kFlattening);
}  // namespace wgs84

/// Earth rotation rate, rad/s.
inline constexpr double kEarthRotationRadPerSec = 7.292115e-5;
/// Mean Earth radius used for great-circle distances, km.
inline constexpr double kMeanEarthRadiusKm = 6371.0;

struct Geodetic {
    double lat_deg = 0.0;
    double lon_deg = 0.0;  // [-180, 180)
    double alt_km = 0.0;
};

/// Earth-fixed position of a WGS84 geodetic point, km.
Vec3 geodetic_to_ecef(double lat_deg, double lon_deg, double alt_km);
Geodetic ecef_to_geodetic(const Vec3& ecef);

Vec3 teme_to_ecef(const Vec3& teme, UtcTime at);
Vec3 ecef_to_teme(const Vec3& ecef, UtcTime at);

/// Ground site in the inertial frame used by the propagator. Velocity is
/// the Earth-rotation velocity of the site.
StateVector ground_site_state(double lat_deg, double lon_deg, double alt_km, UtcTime at);

/// Geodetic point directly beneath an inertial position.
Geodetic subpoint(const Vec3& teme, UtcTime at);
inline Geodetic subpoint(const StateVector& s) { return subpoint(s.position, s.epoch); }

/// Elevation of `target` above the local horizon of a ground site, degrees.
double elevation_deg(double site_lat_deg, double site_lon_deg, double site_alt_km, const Vec3& target_teme,
                     UtcTime at);

/// Great-circle distance on a sphere of the mean Earth radius, km.
double great_circle_km(double lat1_deg, double lon1_deg, double lat2_deg, double lon2_deg);

}  // namespace ssu
