#include "ssu/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "ssu/earth.hpp"

namespace ssu {

GeometrySample geometry(const StateVector& a, const StateVector& b) {
    if (a.epoch != b.epoch) throw EpochMismatch();
    const Vec3 dr = b.position - a.position;
    const Vec3 dv = b.velocity - a.velocity;
    GeometrySample g;
    g.epoch = a.epoch;
    g.distance_km = norm(dr);
    g.relative_speed_kms = norm(dv);
    g.range_rate_kms = g.distance_km > 0.0 ? dot(dr, dv) / g.distance_km : 0.0;
    g.subpoint_lat_deg = subpoint(a).lat_deg;
    return g;
}

void SsdbConfig::validate() const {
    if (!(boundary_lat_deg > 0.0 && boundary_lat_deg < 90.0)) {
        throw ConfigError("ssdb boundary latitude must lie in (0, 90)");
    }
}

SsdbRegion classify_ssdb(double subpoint_lat_deg, const SsdbConfig& cfg) {
    return std::fabs(subpoint_lat_deg) <= cfg.boundary_lat_deg ? SsdbRegion::Inside : SsdbRegion::Outside;
}

const char* to_string(SsdbRegion r) { return r == SsdbRegion::Inside ? "inside" : "outside"; }

int DensityGrid::lat_bins() const { return static_cast<int>(std::lround(180.0 / cell_size_deg)); }
int DensityGrid::lon_bins() const { return static_cast<int>(std::lround(360.0 / cell_size_deg)); }
double DensityGrid::lat_bin_center(int b) const { return -90.0 + (b + 0.5) * cell_size_deg; }
double DensityGrid::lon_bin_center(int b) const { return -180.0 + (b + 0.5) * cell_size_deg; }

std::size_t DensityGrid::total() const {
    std::size_t n = 0;
    for (const auto& [cell, c] : counts) n += c;
    return n;
}

DensityGrid density_grid(std::span<const StateVector> sats, double cell_size_deg) {
    const double bins = 180.0 / cell_size_deg;
    if (!(cell_size_deg > 0.0) || std::fabs(bins - std::round(bins)) > 1e-9) {
        throw ConfigError("cell size must divide 180 degrees evenly");
    }
    DensityGrid g;
    g.cell_size_deg = cell_size_deg;
    if (sats.empty()) return g;
    g.epoch = sats.front().epoch;
    const int nlat = g.lat_bins();
    const int nlon = g.lon_bins();
    for (const StateVector& s : sats) {
        if (s.epoch != g.epoch) throw EpochMismatch();
        const Geodetic p = subpoint(s);
        const int lat_bin = std::clamp(static_cast<int>(std::floor((p.lat_deg + 90.0) / cell_size_deg)), 0, nlat - 1);
        int lon_bin = static_cast<int>(std::floor((p.lon_deg + 180.0) / cell_size_deg)) % nlon;
        if (lon_bin < 0) lon_bin += nlon;
        ++g.counts[{lat_bin, lon_bin}];
    }
    return g;
}

void write_density_csv(std::ostream& out, const DensityGrid& grid) {
    out << "lat_bin_center,lon_bin_center,count\n";
    if (grid.cell_size_deg <= 0.0) return;
    for (int i = 0; i < grid.lat_bins(); ++i) {
        for (int j = 0; j < grid.lon_bins(); ++j) {
            const auto it = grid.counts.find({i, j});
            out << grid.lat_bin_center(i) << ',' << grid.lon_bin_center(j) << ','
                << (it == grid.counts.end() ? 0 : it->second) << '\n';
        }
    }
}

std::vector<Candidate> candidates_within(const StateVector& user, std::span<const StateVector> relays,
                                         double radius_km, std::span<const int> catalog_ids) {
    if (!catalog_ids.empty() && catalog_ids.size() != relays.size()) {
        throw DimensionMismatch("catalog id list does not match the relay list");
    }
    std::vector<Candidate> out;
    if (!(radius_km >= 0.0)) return out;
    double user_lat = std::numeric_limits<double>::quiet_NaN();
    const double r2 = radius_km * radius_km;
    for (std::size_t i = 0; i < relays.size(); ++i) {
        const StateVector& r = relays[i];
        if (r.epoch != user.epoch) throw EpochMismatch();
        const Vec3 dr = r.position - user.position;
        if (std::isfinite(radius_km) && dot(dr, dr) > r2 * (1.0 + 1e-12)) continue;
        const double d = norm(dr);
        if (d > radius_km) continue;
        if (std::isnan(user_lat)) user_lat = subpoint(user).lat_deg;
        const Vec3 dv = r.velocity - user.velocity;
        GeometrySample g;
        g.epoch = user.epoch;
        g.distance_km = d;
        g.relative_speed_kms = norm(dv);
        g.range_rate_kms = d > 0.0 ? dot(dr, dv) / d : 0.0;
        g.subpoint_lat_deg = user_lat;
        out.push_back({i, g});
    }
    auto id = [&](std::size_t i) -> long long {
        return catalog_ids.empty() ? static_cast<long long>(i) : catalog_ids[i];
    };
    std::sort(out.begin(), out.end(), [&](const Candidate& a, const Candidate& b) {
        if (a.geometry.distance_km != b.geometry.distance_km) return a.geometry.distance_km < b.geometry.distance_km;
        if (id(a.index) != id(b.index)) return id(a.index) < id(b.index);
        return a.index < b.index;
    });
    return out;
}

}  // namespace ssu
