#pragma once

#include "ssu/error.hpp"
#include "ssu/time.hpp"
#include "ssu/tle.hpp"
#include "ssu/vec3.hpp"

namespace ssu {

/// Position and velocity in the TEME frame (km, km/s).
struct StateVector {
    UtcTime epoch{};
    Vec3 position;
    Vec3 velocity;
};

enum class GravityModel { Wgs72Old, Wgs72, Wgs84 };

/// Propagation is refused further than this from the element epoch.
inline constexpr double kMaxPropagationDays = 7.0;

class PropagationError : public Error {
public:
    using Error::Error;
};

class PropagationDiverged : public PropagationError {
public:
    PropagationDiverged(int catalog_id, int code, double tsince_min);
    int catalog_id() const noexcept { return catalog_id_; }
    /// SGP4 error code: 1 eccentricity, 2 mean motion, 4 semi-latus rectum, 6 decayed.
    int code() const noexcept { return code_; }

private:
    int catalog_id_;
    int code_;
};

class EpochTooFar : public PropagationError {
public:
    EpochTooFar(int catalog_id, double offset_days);
};

/// Near-Earth SGP4. Construction precomputes the secular coefficients;
/// propagation is const and safe to call concurrently.
class Sgp4 {
public:
    explicit Sgp4(const OrbitalElements& elements, GravityModel gravity = GravityModel::Wgs72);

    StateVector propagate(UtcTime at) const;

    /// Minutes since the element epoch, without the epoch guard.
    StateVector propagate_minutes(double tsince_min) const;

    const OrbitalElements& elements() const noexcept { return elements_; }

private:
    OrbitalElements elements_;

    // Gravity constants.
    double radius_ = 0, xke_ = 0, j2_ = 0, j3oj2_ = 0;

    // Mean elements in radians and radians/minute.
    double ecco_ = 0, inclo_ = 0, nodeo_ = 0, argpo_ = 0, mo_ = 0, no_unkozai_ = 0, bstar_ = 0;

    bool isimp_ = false;
    double aycof_ = 0, con41_ = 0, cc1_ = 0, cc4_ = 0, cc5_ = 0, d2_ = 0, d3_ = 0, d4_ = 0, delmo_ = 0,
           eta_ = 0, argpdot_ = 0, omgcof_ = 0, sinmao_ = 0, t2cof_ = 0, t3cof_ = 0, t4cof_ = 0,
           t5cof_ = 0, x1mth2_ = 0, x7thm1_ = 0, mdot_ = 0, nodedot_ = 0, xlcof_ = 0, xmcof_ = 0,
           nodecf_ = 0;
};

StateVector propagate(const OrbitalElements& elements, UtcTime at, GravityModel gravity = GravityModel::Wgs72);

}  // namespace ssu
