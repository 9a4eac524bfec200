#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "ssu/sgp4.hpp"
#include "ssu/tle.hpp"
#include "test_support.hpp"

using namespace ssu;

namespace {

std::map<int, OrbitalElements> canonical_sets() {
    std::map<int, OrbitalElements> out;
    for (const OrbitalElements& e : load_tle_file(test::data_path("sgp4/canon.tle"))) out[e.catalog_id] = e;
    return out;
}

}  // namespace

TEST(Sgp4, MatchesReferenceEphemeris) {
    const auto sets = canonical_sets();
    const auto ref = test::load_reference_ephemeris();
    ASSERT_EQ(ref.size(), 24u);
    for (const auto& row : ref) {
        const Sgp4 prop(sets.at(row.catalog_id));
        const StateVector s = prop.propagate_minutes(row.tsince_min);
        const double dr = norm(s.position - Vec3{row.r[0], row.r[1], row.r[2]});
        const double dv = norm(s.velocity - Vec3{row.v[0], row.v[1], row.v[2]});
        EXPECT_LT(dr, 1e-6) << row.catalog_id << " t=" << row.tsince_min;
        EXPECT_LT(dv, 1e-9) << row.catalog_id << " t=" << row.tsince_min;
    }
}

TEST(Sgp4, EpochGuard) {
    const auto sets = canonical_sets();
    const OrbitalElements& e = sets.at(6251);
    EXPECT_NO_THROW(propagate(e, add_seconds(e.epoch, 6.9 * 86400.0)));
    EXPECT_NO_THROW(propagate(e, add_seconds(e.epoch, -6.9 * 86400.0)));
    EXPECT_THROW(propagate(e, add_seconds(e.epoch, 7.1 * 86400.0)), EpochTooFar);
    EXPECT_THROW(propagate(e, add_seconds(e.epoch, -7.1 * 86400.0)), EpochTooFar);
}

TEST(Sgp4, StateCarriesRequestedEpoch) {
    const auto sets = canonical_sets();
    const OrbitalElements& e = sets.at(6251);
    const UtcTime t = add_seconds(e.epoch, 1234.5);
    EXPECT_EQ(propagate(e, t).epoch, t);
}

TEST(Sgp4, DecayedOrbitReportsCode) {
    // A low orbit with an absurd drag term decays within days.
    OrbitalElements e = canonical_sets().at(88888);
    e.bstar = 0.05;
    const Sgp4 prop(e);
    bool diverged = false;
    for (double t = 0.0; t < 200000.0 && !diverged; t += 60.0) {
        try {
            prop.propagate_minutes(t);
        } catch (const PropagationDiverged& ex) {
            diverged = true;
            EXPECT_EQ(ex.catalog_id(), 88888);
            EXPECT_TRUE(ex.code() == 1 || ex.code() == 2 || ex.code() == 4 || ex.code() == 6) << ex.code();
        }
    }
    EXPECT_TRUE(diverged);
}

TEST(Sgp4, GravityModelsDifferSlightly) {
    const auto sets = canonical_sets();
    const OrbitalElements& e = sets.at(6251);
    const Vec3 a = Sgp4(e, GravityModel::Wgs72).propagate_minutes(720.0).position;
    const Vec3 b = Sgp4(e, GravityModel::Wgs84).propagate_minutes(720.0).position;
    const Vec3 c = Sgp4(e, GravityModel::Wgs72Old).propagate_minutes(720.0).position;
    EXPECT_GT(norm(a - b), 1e-6);
    EXPECT_LT(norm(a - b), 5.0);
    EXPECT_LT(norm(a - c), 5.0);
}

TEST(Sgp4, OrbitRadiusIsPlausible) {
    for (const OrbitalElements& e : load_tle_file(test::data_path("tle/eo_fleet_20.tle"))) {
        const Sgp4 prop(e);
        for (double t = 0.0; t <= 1440.0; t += 37.0) {
            const StateVector s = prop.propagate_minutes(t);
            const double r = norm(s.position);
            EXPECT_GT(r, 6378.0 + 400.0);
            EXPECT_LT(r, 6378.0 + 600.0);
            // vis-viva for a near-circular orbit
            EXPECT_NEAR(norm(s.velocity), std::sqrt(398600.8 / r), 0.05);
        }
    }
}
