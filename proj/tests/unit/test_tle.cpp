#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "ssu/tle.hpp"
#include "test_support.hpp"

using namespace ssu;

namespace {

const std::string kL1 = "1 00005U 58002B   00179.78495062  .00000023  00000-0  28098-4 0  4753";
const std::string kL2 = "2 00005  34.2682 348.7242 1859667 331.7664  19.3264 10.82419157413667";

// Checksum recomputed column by column from the published definition.
int reference_checksum(const std::string& line) {
    int sum = 0;
    for (std::size_t c = 0; c < 68; ++c) {
        const char ch = line[c];
        if (ch >= '0' && ch <= '9') sum += ch - '0';
        if (ch == '-') sum += 1;
    }
    return sum % 10;
}

std::string with_checksum(std::string line) {
    line[68] = static_cast<char>('0' + reference_checksum(line));
    return line;
}

}  // namespace

TEST(Tle, ChecksumOfCanonicalLines) {
    EXPECT_EQ(tle_checksum(kL1), 3);
    EXPECT_EQ(tle_checksum(kL2), 7);
}

TEST(Tle, ChecksumMatchesEveryBundledLine) {
    for (const char* f : {"tle/starlink_snapshot.tle", "tle/eo_fleet.tle", "sgp4/canon.tle"}) {
        std::istringstream in(test::read_file(test::data_path(f)));
        std::size_t n = 0;
        for (std::string line; std::getline(in, line);) {
            if (line.size() != 69 || (line[0] != '1' && line[0] != '2')) continue;
            EXPECT_EQ(tle_checksum(line), line[68] - '0') << line;
            EXPECT_EQ(tle_checksum(line), reference_checksum(line));
            ++n;
        }
        EXPECT_GT(n, 0u) << f;
    }
}

TEST(Tle, ParsesCanonicalRecord) {
    const OrbitalElements e = parse_tle_record(kL1, kL2);
    EXPECT_EQ(e.catalog_id, 5);
    EXPECT_EQ(e.name, "SAT-5");
    EXPECT_EQ(format_utc(e.epoch), "2000-06-27T18:50:19.733568Z");
    EXPECT_DOUBLE_EQ(e.inclination_deg, 34.2682);
    EXPECT_DOUBLE_EQ(e.raan_deg, 348.7242);
    EXPECT_DOUBLE_EQ(e.eccentricity, 0.1859667);
    EXPECT_DOUBLE_EQ(e.arg_perigee_deg, 331.7664);
    EXPECT_DOUBLE_EQ(e.mean_anomaly_deg, 19.3264);
    EXPECT_DOUBLE_EQ(e.mean_motion_rev_per_day, 10.82419157);
    EXPECT_NEAR(e.bstar, 0.28098e-4, 1e-15);
    EXPECT_TRUE(e.line1_checksum_ok);
    EXPECT_TRUE(e.line2_checksum_ok);
}

TEST(Tle, NegativeExponentFields) {
    const auto recs = parse_tle(test::read_file(test::data_path("sgp4/canon.tle")));
    ASSERT_TRUE(recs.diagnostics.empty());
    ASSERT_EQ(recs.records.size(), 3u);
    EXPECT_NEAR(recs.records[2].bstar, 0.66816e-4, 1e-15);
    EXPECT_NEAR(recs.records[1].bstar, 0.12808e-3, 1e-15);
}

TEST(Tle, NameLines) {
    const std::string text = "0 ISS (ZARYA)\n" + kL1 + "\n" + kL2 + "\n";
    const auto r = parse_tle(text);
    ASSERT_EQ(r.records.size(), 1u);
    EXPECT_EQ(r.records[0].name, "ISS (ZARYA)");

    const auto r2 = parse_tle("  STARLINK-1  \n" + kL1 + "\n" + kL2 + "\n");
    ASSERT_EQ(r2.records.size(), 1u);
    EXPECT_EQ(r2.records[0].name, "STARLINK-1");
}

TEST(Tle, ChecksumCorruptionIsRejected) {
    std::string bad = kL1;
    bad[20] = bad[20] == '9' ? '8' : static_cast<char>(bad[20] + 1);
    EXPECT_THROW(parse_tle_record(bad, kL2), ChecksumMismatch);
}

TEST(Tle, FieldRangesAreEnforced) {
    std::string l2 = kL2;
    l2.replace(8, 8, "181.0000");
    EXPECT_THROW(parse_tle_record(kL1, with_checksum(l2)), FieldOutOfRange);
    l2 = kL2;
    l2.replace(17, 8, "360.0000");
    EXPECT_THROW(parse_tle_record(kL1, with_checksum(l2)), FieldOutOfRange);
    l2 = kL2;
    l2.replace(52, 11, " 0.00000000");
    EXPECT_THROW(parse_tle_record(kL1, with_checksum(l2)), FieldOutOfRange);
}

TEST(Tle, DeepSpaceIsRejected) {
    std::string l2 = kL2;
    l2.replace(52, 11, " 2.00562000");  // ~12 h period
    try {
        parse_tle_record(kL1, with_checksum(l2));
        FAIL() << "accepted a deep-space record";
    } catch (const DeepSpaceRejected& e) {
        EXPECT_EQ(e.catalog_id(), 5);
    }
}

TEST(Tle, MalformedLines) {
    EXPECT_THROW(parse_tle_record(kL1.substr(0, 60), kL2), MalformedTle);
    EXPECT_THROW(parse_tle_record(kL2, kL1), MalformedTle);
    std::string l2 = kL2;
    l2.replace(2, 5, "00006");
    EXPECT_THROW(parse_tle_record(kL1, with_checksum(l2)), MalformedTle);
    // A signed epoch day reads as a number but is not a TLE epoch.
    std::string l1 = kL1;
    l1[20] = '+';
    EXPECT_THROW(parse_tle_record(with_checksum(l1), kL2), MalformedTle);
}

TEST(Tle, ParserReportsAndResumes) {
    std::string bad = kL2;
    bad[30] = bad[30] == '9' ? '0' : static_cast<char>(bad[30] + 1);
    const std::string text = "A\n" + kL1 + "\n" + bad + "\n" + kL2 + "\nB\n" + kL1 + "\n" + kL2 + "\n";
    const auto r = parse_tle(text);
    ASSERT_EQ(r.records.size(), 1u);
    EXPECT_EQ(r.records[0].name, "B");
    ASSERT_EQ(r.diagnostics.size(), 2u);
    EXPECT_EQ(r.diagnostics[0].kind, TleDiagnostic::Kind::ChecksumMismatch);
    EXPECT_EQ(r.diagnostics[0].line_no, 3u);
    EXPECT_EQ(r.diagnostics[1].kind, TleDiagnostic::Kind::Malformed);
    EXPECT_EQ(r.diagnostics[1].line_no, 4u);
}

TEST(Tle, LoadFileThrowsWithDiagnostics) {
    test::TempDir dir("tle");
    {
        std::ofstream out(dir / "x.tle");
        out << kL1 << "\n" << kL1 << "\n";
    }
    try {
        load_tle_file(dir / "x.tle");
        FAIL();
    } catch (const TleFileError& e) {
        EXPECT_FALSE(e.diagnostics().empty());
    }
    EXPECT_THROW(load_tle_file(dir / "missing.tle"), IngestError);
}

TEST(Tle, EmptyInputYieldsNothing) {
    const auto r = parse_tle("\n\n   \n");
    EXPECT_TRUE(r.records.empty());
    EXPECT_TRUE(r.diagnostics.empty());
}

// Any record the parser accepts satisfies the field ranges, even after
// random edits with the checksum repaired.
TEST(TleProperty, AcceptedRecordsRespectRanges) {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<int> col(1, 67);
    std::uniform_int_distribution<int> ch(0, 14);
    const std::string alphabet = "0123456789 .-+e";
    std::size_t accepted = 0;
    for (int k = 0; k < 20000; ++k) {
        std::string l1 = kL1, l2 = kL2;
        std::string& target = (k % 2) ? l1 : l2;
        for (int edits = 0; edits < 2; ++edits) target[col(rng)] = alphabet[ch(rng)];
        try {
            const OrbitalElements e = parse_tle_record(with_checksum(l1), with_checksum(l2));
            ++accepted;
            EXPECT_GE(e.inclination_deg, 0.0);
            EXPECT_LE(e.inclination_deg, 180.0);
            EXPECT_GE(e.raan_deg, 0.0);
            EXPECT_LT(e.raan_deg, 360.0);
            EXPECT_GE(e.eccentricity, 0.0);
            EXPECT_LT(e.eccentricity, 1.0);
            EXPECT_GE(e.arg_perigee_deg, 0.0);
            EXPECT_LT(e.arg_perigee_deg, 360.0);
            EXPECT_GE(e.mean_anomaly_deg, 0.0);
            EXPECT_LT(e.mean_anomaly_deg, 360.0);
            EXPECT_GT(e.mean_motion_rev_per_day, 1440.0 / kDeepSpacePeriodMinutes);
            EXPECT_GE(e.catalog_id, 0);
        } catch (const TleError&) {
        }
    }
    EXPECT_GT(accepted, 0u);
}
