#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "dlcoho/error.hpp"
#include "dlcoho/pipeline.hpp"

using namespace dlcoho;
namespace fs = std::filesystem;

namespace {

const std::string kData = DLCOHO_DEFAULT_DATA;

PipelineResult run(const std::string& name, std::optional<std::map<std::string, bool>> flags = {}) {
  PipelineOptions o;
  o.data_dir = kData;
  o.flags = std::move(flags);
  return run_pipeline(name, o);
}

CharSet charset(const std::string& g) { return load_charset(kData + "/charsets/" + g + ".json"); }

}  // namespace

TEST(Diff, EqualTablesHaveNoEntries) {
  auto cs = charset("f4");
  auto p = parse_poly("h^6 St + 3 h^7 t St", cs);
  EXPECT_TRUE(diff_tables(p, p).empty());
}

TEST(Diff, BumpedMultiplicityIsOneEntry) {
  auto cs = charset("f4");
  auto a = parse_poly("h^6 St + 3 h^7 t St", cs);
  auto b = parse_poly("h^6 St + 4 h^7 t St", cs);
  auto d = diff_tables(a, b);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].grade.h, 7);
  EXPECT_EQ(d[0].grade.t2, 2);
  EXPECT_EQ(d[0].chr, "St");
  EXPECT_EQ(d[0].actual, 3);
  EXPECT_EQ(d[0].golden, 4);
}

TEST(Diff, DifferentGroupsAreRejected) {
  auto a = parse_poly("h^6 St", charset("f4"));
  auto b = parse_poly("h^6 St", charset("e6"));
  EXPECT_THROW(diff_tables(a, b), UsageError);
}

TEST(Pipeline, F4) {
  auto r = run("f4_phi8");
  EXPECT_EQ(r.exit_code, 0) << r.report.dump(2);
}

TEST(Pipeline, E6) {
  auto r = run("e6_phi9");
  EXPECT_EQ(r.exit_code, 0) << r.report.dump(2);
}

TEST(Pipeline, E7WithAssumption) {
  auto r = run("e7_phi14");
  EXPECT_EQ(r.exit_code, 0) << r.report.dump(2);
}

TEST(Pipeline, E8WithAssumptions) {
  auto r = run("e8_phi24");
  EXPECT_EQ(r.exit_code, 0) << r.report.dump(2);
}

TEST(Pipeline, E7WithoutD4AssumptionLeavesD4RowsOpen) {
  auto with = run("e7_phi14");
  auto without = run("e7_phi14", std::map<std::string, bool>{{"assume_D4_vanishing", false}});
  EXPECT_EQ(without.exit_code, 2) << without.report["stages"]["diff"].dump(2);
  const auto& undet = without.report["stages"]["table"]["undetermined_series"];
  EXPECT_EQ(undet, nlohmann::json::array({"D4"}));
  EXPECT_EQ(with.report["stages"]["table"]["unconditional"], without.report["stages"]["table"]["unconditional"]);
  for (const auto& c : without.report["stages"]["diff"]["conditional"]) EXPECT_EQ(c["status"], "undetermined");
}

TEST(Pipeline, E8WithoutE6AssumptionLeavesE6RowsOpen) {
  auto without = run("e8_phi24", std::map<std::string, bool>{{"assume_D4_vanishing", true},
                                                              {"assume_E6_series_vanishing", false}});
  EXPECT_EQ(without.exit_code, 2) << without.report["stages"]["diff"].dump(2);
  bool e6_open = false;
  for (const auto& c : without.report["stages"]["diff"]["conditional"]) {
    if (c["on"] == nlohmann::json::array({"assume_E6_series_vanishing"})) {
      EXPECT_EQ(c["status"], "undetermined");
      e6_open = true;
    } else {
      EXPECT_EQ(c["status"], "match");
    }
  }
  EXPECT_TRUE(e6_open);
}

TEST(Pipeline, ReportIsDeterministic) {
  EXPECT_EQ(run("f4_phi8").report.dump(), run("f4_phi8").report.dump());
}

TEST(Pipeline, UnknownFlagIsAConfigError) {
  EXPECT_THROW(run("f4_phi8", std::map<std::string, bool>{{"assume_nothing", true}}), ConfigError);
}

TEST(Pipeline, MissingScenarioIsAConfigError) { EXPECT_THROW(run("no_such_scenario"), ConfigError); }

TEST(Pipeline, CorruptedGoldenFails) {
  fs::path dir = fs::temp_directory_path() / "dlcoho_corrupt";
  fs::remove_all(dir);
  fs::copy(kData, dir, fs::copy_options::recursive);
  auto golden = read_json((dir / "golden/f4_phi8.json").string());
  std::string expr = golden["table"]["unconditional"];
  golden["table"]["unconditional"] = expr + " + h^9 t^3 St";
  std::ofstream((dir / "golden/f4_phi8.json").string()) << golden.dump(2);
  PipelineOptions o;
  o.data_dir = dir.string();
  auto r = run_pipeline("f4_phi8", o);
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_EQ(r.report["stages"]["diff"]["unconditional"]["status"], "mismatch");
  fs::remove_all(dir);
}
