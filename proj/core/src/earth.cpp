#include "ssu/earth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ssu {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

void check_latitude(double lat_deg) {
    if (!(std::fabs(lat_deg) <= 90.0)) throw ConfigError("latitude outside [-90, 90]");
}

}  // namespace

Vec3 geodetic_to_ecef(double lat_deg, double lon_deg, double alt_km) {
    check_latitude(lat_deg);
    const double lat = lat_deg * kDeg;
    const double lon = lon_deg * kDeg;
    const double s = std::sin(lat);
    const double c = std::cos(lat);
    const double n = wgs84::kSemiMajorKm / std::sqrt(1.0 - wgs84::kEccSq * s * s);
    return {(n + alt_km) * c * std::cos(lon), (n + alt_km) * c * std::sin(lon),
            (n * (1.0 - wgs84::kEccSq) + alt_km) * s};
}

Geodetic ecef_to_geodetic(const Vec3& r) {
    const double p = std::hypot(r.x, r.y);
    Geodetic g;
    g.lon_deg = std::atan2(r.y, r.x) / kDeg;
    if (g.lon_deg >= 180.0) g.lon_deg -= 360.0;
    if (p < 1e-9) {
        g.lat_deg = r.z >= 0.0 ? 90.0 : -90.0;
        g.alt_km = std::fabs(r.z) - wgs84::kSemiMajorKm * std::sqrt(1.0 - wgs84::kEccSq);
        return g;
    }
    // Fixed-point iteration on latitude; converges to well below 1e-12 rad
    // for any altitude of interest within a handful of steps.
    double lat = std::atan2(r.z, p * (1.0 - wgs84::kEccSq));
    double n = wgs84::kSemiMajorKm;
    for (int i = 0; i < 10; ++i) {
        const double s = std::sin(lat);
        n = wgs84::kSemiMajorKm / std::sqrt(1.0 - wgs84::kEccSq * s * s);
        const double next = std::atan2(r.z + wgs84::kEccSq * n * s, p);
        if (std::fabs(next - lat) < 1e-14) {
            lat = next;
            break;
        }
        lat = next;
    }
    const double s = std::sin(lat);
    n = wgs84::kSemiMajorKm / std::sqrt(1.0 - wgs84::kEccSq * s * s);
    g.lat_deg = lat / kDeg;
    g.alt_km = std::fabs(lat) < 1.3 ? p / std::cos(lat) - n : r.z / s - n * (1.0 - wgs84::kEccSq);
    return g;
}

Vec3 teme_to_ecef(const Vec3& teme, UtcTime at) { return rotate_z(teme, -gmst_radians(at)); }

Vec3 ecef_to_teme(const Vec3& ecef, UtcTime at) { return rotate_z(ecef, gmst_radians(at)); }

StateVector ground_site_state(double lat_deg, double lon_deg, double alt_km, UtcTime at) {
    const Vec3 r = ecef_to_teme(geodetic_to_ecef(lat_deg, lon_deg, alt_km), at);
    StateVector s;
    s.epoch = at;
    s.position = r;
    s.velocity = cross(Vec3{0.0, 0.0, kEarthRotationRadPerSec}, r);
    return s;
}

Geodetic subpoint(const Vec3& teme, UtcTime at) { return ecef_to_geodetic(teme_to_ecef(teme, at)); }

double elevation_deg(double site_lat_deg, double site_lon_deg, double site_alt_km, const Vec3& target_teme,
                     UtcTime at) {
    const Vec3 site = geodetic_to_ecef(site_lat_deg, site_lon_deg, site_alt_km);
    const Vec3 rho = teme_to_ecef(target_teme, at) - site;
    const double lat = site_lat_deg * kDeg;
    const double lon = site_lon_deg * kDeg;
    const Vec3 up{std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)};
    // atan2 keeps full precision near the zenith, where asin does not.
    const double vertical = dot(rho, up);
    const double horizontal = norm(rho - up * vertical);
    if (vertical == 0.0 && horizontal == 0.0) return 90.0;
    return std::atan2(vertical, horizontal) / kDeg;
}

double great_circle_km(double lat1_deg, double lon1_deg, double lat2_deg, double lon2_deg) {
    const double p1 = lat1_deg * kDeg;
    const double p2 = lat2_deg * kDeg;
    const double dp = p2 - p1;
    const double dl = (lon2_deg - lon1_deg) * kDeg;
    const double a = std::sin(dp / 2) * std::sin(dp / 2) + std::cos(p1) * std::cos(p2) * std::sin(dl / 2) * std::sin(dl / 2);
    return 2.0 * kMeanEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(a)));
}

}  // namespace ssu
