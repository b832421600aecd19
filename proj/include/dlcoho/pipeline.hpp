#pragma once

#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dlcoho/cohom.hpp"

namespace dlcoho {

inline const std::vector<std::string> kAssumptionFlags = {"assume_D4_vanishing", "assume_E6_series_vanishing"};

// Data directory: $DLCOHO_DATA if set, otherwise the source tree's data/.
std::string default_data_dir();

nlohmann::json read_json(const std::string& path);

struct DiffEntry {
  Grade grade;
  std::string chr;
  Unity unity;
  long long actual = 0;
  long long golden = 0;
};

// Grade-by-grade term differences; empty iff the two polynomials agree.
// Polynomials over different groups raise UsageError.
std::vector<DiffEntry> diff_tables(const CohPoly& actual, const CohPoly& golden);
nlohmann::json diff_to_json(const std::vector<DiffEntry>& diff);

struct PipelineOptions {
  std::string data_dir;  // empty: default_data_dir()
  // Replaces the scenario's own flags when set. Nested runs inherit the
  // effective flags of the outermost scenario.
  std::optional<std::map<std::string, bool>> flags;
  int jobs = 1;
};

// What is known about one Harish-Chandra series in the output table.
struct SeriesState {
  bool known = false;
  std::set<std::string> conditions;  // assumption flags the value depends on
};

struct PipelineResult {
  nlohmann::json report;
  int exit_code = 3;
  std::string group;
  CohPoly table;  // every determined row, conditional ones included
  std::map<std::string, SeriesState> series;
};

// Exit codes: 0 full match, 2 only conditional rows mismatch or stay
// undetermined, 1 any other mismatch. Infrastructure problems (missing or
// malformed data) propagate as ConfigError; callers map them to 3.
PipelineResult run_pipeline(const std::string& scenario_path, const PipelineOptions& opts = {});

// Resolves a scenario given as a path or as a bare name under
// <data>/scenarios/.
std::string resolve_scenario(const std::string& name_or_path, const std::string& data_dir);

}  // namespace dlcoho
