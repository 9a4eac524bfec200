#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ssu/link_quality.hpp"

using namespace ssu;

TEST(LinkQuality, PathLossAtReference) {
    EXPECT_NEAR(fspl_db(550.0, 12e9), 168.83, 0.01);
    // Friis in one logarithm
    const double oracle = 20.0 * std::log10(4.0 * std::numbers::pi * 550e3 * 12e9 / kSpeedOfLightMps);
    EXPECT_NEAR(fspl_db(550.0, 12e9), oracle, 1e-9);
}

TEST(LinkQuality, PathLossDoubling) {
    for (double d : {1.0, 550.0, 968.0, 2000.0}) {
        EXPECT_NEAR(fspl_db(2.0 * d, 12e9) - fspl_db(d, 12e9), 20.0 * std::log10(2.0), 1e-9);
        EXPECT_NEAR(fspl_db(d, 24e9) - fspl_db(d, 12e9), 6.0206, 1e-4);
    }
}

TEST(LinkQuality, PathLossRejectsNonPositive) {
    EXPECT_THROW(fspl_db(0.0, 12e9), NonPositiveInput);
    EXPECT_THROW(fspl_db(550.0, -1.0), NonPositiveInput);
}

TEST(LinkQuality, CfoSnrWithoutOffsetIsIdentity) {
    for (double s : {0.01, 1.0, 10.0, 100.0, 1e4}) EXPECT_EQ(cfo_snr(s, 0.0), s);
}

TEST(LinkQuality, CfoSnrDecreasesWithOffset) {
    for (double s : {1.0, 10.0, 100.0}) {
        double prev = cfo_snr(s, 0.0);
        for (int k = 1; k <= 9; ++k) {
            const double cur = cfo_snr(s, 0.05 * k);
            EXPECT_LT(cur, prev) << s << " " << k;
            EXPECT_DOUBLE_EQ(cfo_snr(s, -0.05 * k), cur);
            prev = cur;
        }
    }
}

TEST(LinkQuality, CfoSnrClosedForm) {
    const double s = 10.0, e = 0.2;
    const double x = std::numbers::pi * e;
    const double expected = s * std::pow(std::sin(x) / x, 2) / (1.0 + 0.5947 * s * std::pow(std::sin(x), 2));
    EXPECT_NEAR(cfo_snr(s, e), expected, 1e-12);
}

TEST(LinkQuality, CfoSnrDomain) {
    EXPECT_THROW(cfo_snr(10.0, 0.5), EpsilonOutOfRange);
    EXPECT_THROW(cfo_snr(10.0, -0.5), EpsilonOutOfRange);
    EXPECT_THROW(cfo_snr(10.0, 0.75), EpsilonOutOfRange);
    EXPECT_NO_THROW(cfo_snr(10.0, 0.4999));
}

TEST(LinkQuality, DopplerEpsilon) {
    const RadioConfig r;
    // 1 km/s at 12 GHz is a 40.03 kHz shift, 0.1668 of a 240 kHz subcarrier.
    EXPECT_NEAR(doppler_epsilon(1.0, r), 1000.0 / kSpeedOfLightMps * 12e9 / 240e3, 1e-15);
    EXPECT_NEAR(doppler_epsilon(1.0, r), 0.16678, 1e-5);
    EXPECT_DOUBLE_EQ(doppler_epsilon(-2.0, r), doppler_epsilon(2.0, r));
}

TEST(LinkQuality, EcN0FollowsPathLoss) {
    const RadioConfig r;
    EXPECT_NEAR(ec_n0_db_at(550.0, r), 20.0, 1e-12);
    EXPECT_NEAR(ec_n0_db_at(1100.0, r), 20.0 - 6.0206, 1e-4);
    EXPECT_NEAR(ec_n0_db_at(275.0, r), 20.0 + 6.0206, 1e-4);
}

TEST(LinkQuality, ResidualDoppler) {
    GeometrySample g;
    g.relative_speed_kms = 8.0;
    g.range_rate_kms = -3.0;
    EXPECT_NEAR(residual_doppler_speed(g, DopplerSource::RelativeSpeed, 7.4), 0.6, 1e-12);
    EXPECT_DOUBLE_EQ(residual_doppler_speed(g, DopplerSource::RangeRate, 0.0), 3.0);
}

TEST(LinkQuality, LinkSnrGate) {
    const RadioConfig r;
    const double edge = 0.5 * r.subcarrier_spacing_hz * kSpeedOfLightMps / r.carrier_freq_hz / 1000.0;
    EXPECT_FALSE(link_snr_db(550.0, edge * (1.0 + 1e-12), r).has_value());
    EXPECT_TRUE(link_snr_db(550.0, edge * (1.0 - 1e-9), r).has_value());
    EXPECT_FALSE(link_snr_db(550.0, edge + 1.0, r).has_value());
    ASSERT_TRUE(link_snr_db(550.0, 0.0, r).has_value());
    EXPECT_NEAR(*link_snr_db(550.0, 0.0, r), 20.0, 1e-9);
    EXPECT_LT(*link_snr_db(550.0, 1.0, r), 20.0);
    EXPECT_LT(*link_snr_db(900.0, 1.0, r), *link_snr_db(550.0, 1.0, r));
}

TEST(LinkQuality, DecibelConversions) {
    EXPECT_DOUBLE_EQ(db_to_linear(20.0), 100.0);
    EXPECT_NEAR(linear_to_db(db_to_linear(13.7)), 13.7, 1e-12);
}

TEST(LinkQuality, Tiers) {
    EXPECT_EQ(parse_tier("business"), Tier::Business);
    EXPECT_STREQ(to_string(parse_tier("roam")), "roam");
    EXPECT_THROW(parse_tier("gold"), ConfigError);
}

TEST(LinkQuality, RadioValidation) {
    RadioConfig r;
    EXPECT_NO_THROW(r.validate());
    r.carrier_freq_hz = 0.0;
    EXPECT_THROW(r.validate(), ConfigError);
}
