#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "ssu/sgp4.hpp"
#include "ssu/time.hpp"

namespace ssu {

struct GeometrySample {
    UtcTime epoch{};
    double distance_km = 0.0;
    double relative_speed_kms = 0.0;  // |v1 - v2|
    double range_rate_kms = 0.0;      // d(distance)/dt
    double subpoint_lat_deg = 0.0;    // geodetic latitude of the observer
};

/// Observer is `a`. Throws EpochMismatch when the epochs differ.
GeometrySample geometry(const StateVector& a, const StateVector& b);

enum class SsdbRegion { Inside, Outside };

struct SsdbConfig {
    double boundary_lat_deg = 53.0;
    void validate() const;
};

/// The boundary itself counts as inside.
SsdbRegion classify_ssdb(double subpoint_lat_deg, const SsdbConfig& cfg = {});

const char* to_string(SsdbRegion r);

struct DensityGrid {
    double cell_size_deg = 0.0;
    UtcTime epoch{};
    /// (lat_bin, lon_bin) -> count. Bin 0 starts at -90 latitude / -180 longitude.
    std::map<std::pair<int, int>, std::size_t> counts;

    int lat_bins() const;
    int lon_bins() const;
    double lat_bin_center(int lat_bin) const;
    double lon_bin_center(int lon_bin) const;
    std::size_t total() const;
};

/// Throws EpochMismatch when the states do not share an epoch and
/// ConfigError when cell_size does not divide 180.
DensityGrid density_grid(std::span<const StateVector> sats, double cell_size_deg);

/// One row per cell, including empty ones, ordered by latitude then longitude.
void write_density_csv(std::ostream& out, const DensityGrid& grid);

struct Candidate {
    std::size_t index = 0;
    GeometrySample geometry;
};

/// Relays within `radius_km` of the user, ordered by distance and then by
/// catalog id (`catalog_ids[i]` for relay i, or the index when empty).
std::vector<Candidate> candidates_within(const StateVector& user, std::span<const StateVector> relays,
                                         double radius_km, std::span<const int> catalog_ids = {});

}  // namespace ssu
