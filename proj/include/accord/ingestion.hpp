#pragma once

#include <map>
#include <string>
#include <vector>

#include "accord/core_data.hpp"

namespace accord {

enum class Outcome { Pass, Fail, Error };
enum class Granularity { Class, Method, Assertion };

Granularity granularity_from_string(const std::string& s);
std::string to_string(Granularity g);

struct TestOutcomeEntry {
  std::string object_id;
  std::string suite_id;
  std::string case_id;
  Granularity granularity = Granularity::Method;
  Outcome outcome = Outcome::Pass;
};

struct TestOutcomeMatrix {
  std::vector<TestOutcomeEntry> entries;
};

struct ScoreCell {
  double score = 0.0;  // percent in [0, 100]
  long passed = 0;
  long failed = 0;
  long errored = 0;
  long total = 0;
};

struct ScoreSet {
  Granularity granularity = Granularity::Method;
  // keyed by (object_id, suite_id); std::map keeps output deterministic
  std::map<std::pair<std::string, std::string>, ScoreCell> scores;
};

// Header must be exactly: object_id,instrument_id,replicate,variable,value
// Empty replicate field means 0. Throws BadHeader, BadRow, NonFiniteValue.
MeasurementDataset parse_measurements_csv(const std::string& text);

// Inverse of parse_measurements_csv; values printed with 17 significant
// digits so the round trip is exact.
std::string emit_measurements_csv(const MeasurementDataset& ds);

// Header: object_id,suite_id,case_id,granularity,outcome
// Throws BadHeader, BadRow, UnknownOutcomeToken, DuplicateCase.
TestOutcomeMatrix parse_test_outcomes_csv(const std::string& text);

// score = 100 * pass / (pass + fail + error); `error` counts as fail but is
// tallied separately. Throws NoEntriesAtGranularity.
ScoreSet score_outcomes(const TestOutcomeMatrix& m, Granularity granularity);

// Scores as a dataset (suite as instrument, replicate 0) for further analysis.
MeasurementDataset scores_to_dataset(const ScoreSet& s,
                                     const std::string& variable);

}  // namespace accord
