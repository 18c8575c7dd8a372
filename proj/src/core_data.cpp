#include "accord/core_data.hpp"

#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "accord/error.hpp"

namespace accord {

namespace {

std::vector<std::string> distinct_in_order(
    const std::vector<MeasurementRecord>& records,
    const std::string MeasurementRecord::*field) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& r : records) {
    const std::string& v = r.*field;
    if (seen.insert(v).second) out.push_back(v);
  }
  return out;
}

}  // namespace

MeasurementDataset MeasurementDataset::build(
    std::vector<MeasurementRecord> records) {
  if (records.empty()) raise_input("EmptyInput", "no measurement records");
  std::set<std::tuple<std::string, std::string, int, std::string>> keys;
  for (const auto& r : records) {
    if (r.object_id.empty() || r.instrument_id.empty())
      raise_input("EmptyInput", "record has empty object or instrument id");
    if (!std::isfinite(r.value))
      raise_input("NonFiniteValue",
                  "non-finite value for object '" + r.object_id +
                      "', instrument '" + r.instrument_id + "'");
    auto key = std::make_tuple(r.object_id, r.instrument_id, r.replicate,
                               r.variable);
    if (!keys.insert(key).second)
      raise_input("DuplicateKey",
                  "duplicate record for object '" + r.object_id +
                      "', instrument '" + r.instrument_id + "', replicate " +
                      std::to_string(r.replicate) + ", variable '" +
                      r.variable + "'");
  }
  return MeasurementDataset(std::move(records));
}

std::vector<std::string> MeasurementDataset::object_ids() const {
  return distinct_in_order(records_, &MeasurementRecord::object_id);
}

std::vector<std::string> MeasurementDataset::instrument_ids() const {
  return distinct_in_order(records_, &MeasurementRecord::instrument_id);
}

std::vector<std::string> MeasurementDataset::variables() const {
  return distinct_in_order(records_, &MeasurementRecord::variable);
}

PairedMeasurements pair_by_object(const MeasurementDataset& ds,
                                  const std::string& instrument_a,
                                  const std::string& instrument_b,
                                  const std::string& variable) {
  std::vector<std::string> order;
  std::map<std::string, std::pair<int, double>> a_vals;  // count, value
  std::map<std::string, std::pair<int, double>> b_vals;
  std::set<std::string> seen;
  for (const auto& r : ds.records()) {
    if (r.variable != variable) continue;
    if (r.instrument_id != instrument_a && r.instrument_id != instrument_b)
      continue;
    if (seen.insert(r.object_id).second) order.push_back(r.object_id);
    auto& slot = (r.instrument_id == instrument_a) ? a_vals[r.object_id]
                                                   : b_vals[r.object_id];
    slot.first += 1;
    slot.second = r.value;
  }
  PairedMeasurements out;
  out.instrument_a = instrument_a;
  out.instrument_b = instrument_b;
  for (const auto& obj : order) {
    auto a = a_vals.find(obj);
    auto b = b_vals.find(obj);
    if (a == a_vals.end() || b == b_vals.end())
      raise_input("MissingPairMember",
                  "object '" + obj + "' lacks a value for instrument '" +
                      (a == a_vals.end() ? instrument_a : instrument_b) + "'");
    if (a->second.first > 1 || b->second.first > 1)
      raise_input("AmbiguousReplicates",
                  "object '" + obj +
                      "' has multiple replicates; aggregate before pairing");
    out.pairs.push_back({obj, a->second.second, b->second.second});
  }
  return out;
}

}  // namespace accord
