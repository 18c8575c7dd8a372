#pragma once

#include <optional>
#include <string>
#include <vector>

namespace accord {

// One observation: a value produced by an instrument on an object.
struct MeasurementRecord {
  std::string object_id;
  std::string instrument_id;
  int replicate = 0;
  std::string variable;
  double value = 0.0;
};

// Immutable, validated collection of records. Iteration order equals
// insertion order; (object, instrument, replicate, variable) keys are unique.
class MeasurementDataset {
 public:
  // Throws DuplicateKey, NonFiniteValue, EmptyInput.
  static MeasurementDataset build(std::vector<MeasurementRecord> records);

  const std::vector<MeasurementRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  // Distinct ids in first-appearance order.
  std::vector<std::string> object_ids() const;
  std::vector<std::string> instrument_ids() const;
  std::vector<std::string> variables() const;

 private:
  explicit MeasurementDataset(std::vector<MeasurementRecord> records)
      : records_(std::move(records)) {}
  std::vector<MeasurementRecord> records_;
};

struct PairedMeasurements {
  struct Pair {
    std::string object_id;
    double value_a = 0.0;
    double value_b = 0.0;
  };
  std::string instrument_a;
  std::string instrument_b;
  std::vector<Pair> pairs;
};

// One row per object, value_a from instrument_a, value_b from instrument_b.
// Each object must have exactly one replicate per instrument for the variable;
// callers aggregate replicates first (typically by mean).
// Throws MissingPairMember, AmbiguousReplicates.
PairedMeasurements pair_by_object(const MeasurementDataset& ds,
                                  const std::string& instrument_a,
                                  const std::string& instrument_b,
                                  const std::string& variable);

struct AnovaRow {
  std::string term;
  long df = 0;
  double ss = 0.0;
  std::optional<double> ms;
  std::optional<double> f;
  std::optional<double> p;
};

struct AnovaTable {
  std::vector<AnovaRow> rows;

  const AnovaRow* find(const std::string& term) const {
    for (const auto& r : rows)
      if (r.term == term) return &r;
    return nullptr;
  }
};

}  // namespace accord
