#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "ssu/scenario.hpp"
#include "test_support.hpp"

using namespace ssu;

namespace {

const char* kMinimal = R"({
  "version": 1,
  "name": "t",
  "duration_hours": 1.0,
  "eo_tles": "eo.tle",
  "relay_tles": "relays.tle",
  "pop_profiles": "pops.json"
})";

}  // namespace

TEST(Scenario, MinimalDocumentUsesDefaults) {
    const ScenarioConfig c = parse_scenario(kMinimal, "/base");
    EXPECT_EQ(c.name, "t");
    EXPECT_EQ(c.eo_tles, std::filesystem::path("/base/eo.tle"));
    EXPECT_EQ(c.session_seconds, 15);
    EXPECT_EQ(c.eo_multiplier, 3);
    EXPECT_EQ(c.relay_capacity, 32);
    EXPECT_DOUBLE_EQ(c.switch_penalty, 0.1);
    EXPECT_EQ(c.selection_mode, SelectionMode::Dual);
    EXPECT_EQ(c.penalty_mode, PenaltyMode::NewLinksOnly);
    EXPECT_FALSE(c.baseline);
    EXPECT_EQ(c.session_count(), 240u);
}

TEST(Scenario, BundledScenariosLoad) {
    for (const char* name : {"ssu", "ssu75", "polar_outage", "random", "wait_and_transfer"}) {
        for (const std::string dir : {"scenarios/", "scenarios/desk/"}) {
            const ScenarioConfig c = load_scenario(test::data_path(dir + name + ".json"));
            EXPECT_TRUE(std::filesystem::exists(c.eo_tles)) << c.eo_tles;
            EXPECT_TRUE(std::filesystem::exists(c.relay_tles)) << c.relay_tles;
            EXPECT_TRUE(std::filesystem::exists(c.pop_profiles)) << c.pop_profiles;
        }
    }
    EXPECT_DOUBLE_EQ(load_scenario(test::data_path("scenarios/ssu75.json")).availability_fraction, 0.75);
    EXPECT_TRUE(load_scenario(test::data_path("scenarios/polar_outage.json")).polar_outage);
    EXPECT_EQ(load_scenario(test::data_path("scenarios/random.json")).selection_mode,
              SelectionMode::RandomAmongSelected);
    const ScenarioConfig w = load_scenario(test::data_path("scenarios/wait_and_transfer.json"));
    ASSERT_TRUE(w.baseline);
    EXPECT_DOUBLE_EQ(w.baseline->min_elevation_deg, 25.0);
    EXPECT_FALSE(w.baseline->stations.empty());
}

TEST(Scenario, UnknownKeysAreSchemaViolations) {
    auto doc = nlohmann::json::parse(kMinimal);
    doc["swtich_penalty"] = 0.2;
    try {
        parse_scenario(doc.dump(), ".");
        FAIL() << "accepted an unknown key";
    } catch (const SchemaViolation& e) {
        EXPECT_NE(std::string(e.what()).find("swtich_penalty"), std::string::npos);
    }
    doc = nlohmann::json::parse(kMinimal);
    doc["selection"] = {{"v_ground", 7.4}};
    EXPECT_THROW(parse_scenario(doc.dump(), "."), SchemaViolation);
}

TEST(Scenario, TypeAndVersionErrors) {
    auto doc = nlohmann::json::parse(kMinimal);
    doc["duration_hours"] = "long";
    EXPECT_THROW(parse_scenario(doc.dump(), "."), SchemaViolation);
    doc = nlohmann::json::parse(kMinimal);
    doc["version"] = 2;
    EXPECT_THROW(parse_scenario(doc.dump(), "."), SchemaViolation);
    doc = nlohmann::json::parse(kMinimal);
    doc["selection_mode"] = "fastest";
    EXPECT_THROW(parse_scenario(doc.dump(), "."), SchemaViolation);
    EXPECT_THROW(parse_scenario("{not json", "."), SchemaViolation);
    EXPECT_THROW(parse_scenario("[]", "."), SchemaViolation);
}

TEST(Scenario, InvalidValuesAreConfigErrors) {
    const std::vector<std::pair<std::string, std::string>> bad = {
        {"switch_penalty", "1.0"},         {"switch_penalty", "-0.1"},   {"availability_fraction", "1.5"},
        {"duration_hours", "0"},           {"session_seconds", "0"},     {"eo_multiplier", "0"},
        {"relay_capacity", "-1"},          {"selection.v_ground_kms", "-1"},
        {"baseline.min_elevation_deg", "95"},
    };
    for (const auto& [k, v] : bad) {
        EXPECT_THROW(parse_scenario(kMinimal, ".", {{k, v}}), ConfigError) << k << "=" << v;
    }
}

TEST(Scenario, OverridesApplyBeforeValidation) {
    const ScenarioConfig c = parse_scenario(
        kMinimal, "/base",
        {{"switch_penalty", "0.3"}, {"selection.search_radius_km", "900"}, {"selection_mode", "nearest"},
         {"eo_tles", "other.tle"}, {"name", "renamed"}});
    EXPECT_DOUBLE_EQ(c.switch_penalty, 0.3);
    EXPECT_DOUBLE_EQ(c.selection.search_radius_km, 900.0);
    EXPECT_EQ(c.selection_mode, SelectionMode::Nearest);
    EXPECT_EQ(c.name, "renamed");
    // Overridden paths are taken relative to the working directory.
    EXPECT_EQ(c.eo_tles, std::filesystem::path("other.tle"));
    EXPECT_EQ(c.relay_tles, std::filesystem::path("/base/relays.tle"));
}

TEST(Scenario, OverrideParsing) {
    EXPECT_EQ(parse_override("a.b=3"), (Override{"a.b", "3"}));
    EXPECT_EQ(parse_override("k=x=y"), (Override{"k", "x=y"}));
    EXPECT_THROW(parse_override("novalue"), ConfigError);
    EXPECT_THROW(parse_override("=3"), ConfigError);
    EXPECT_THROW(parse_scenario(kMinimal, ".", {{"name.sub", "1"}}), ConfigError);
}

TEST(Scenario, CanonicalJsonRoundTrips) {
    const ScenarioConfig c = load_scenario(test::data_path("scenarios/wait_and_transfer.json"));
    const std::string text = scenario_to_json(c);
    const ScenarioConfig again = parse_scenario(text, c.eo_tles.parent_path());
    EXPECT_EQ(scenario_to_json(again), text);
}

TEST(Scenario, SessionCount) {
    ScenarioConfig c;
    c.duration_hours = 24.0;
    EXPECT_EQ(c.session_count(), 5760u);
    c.session_seconds = 7;
    EXPECT_EQ(c.session_count(), 12342u);  // floor(86400 / 7)
}
