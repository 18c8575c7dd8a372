#include "accord/ingestion.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <tuple>

#include "accord/error.hpp"

namespace accord {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char ch : text) {
    if (ch == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty() && cur.back() == '\r') cur.pop_back();
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

double parse_double(const std::string& s, std::size_t line_no) {
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    raise_input("BadRow",
                "line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
  if (pos != s.size())
    raise_input("BadRow", "line " + std::to_string(line_no) +
                              ": trailing characters in number '" + s + "'");
  if (!std::isfinite(v))
    raise_input("NonFiniteValue",
                "line " + std::to_string(line_no) + ": non-finite value");
  return v;
}

}  // namespace

Granularity granularity_from_string(const std::string& s) {
  if (s == "class") return Granularity::Class;
  if (s == "method") return Granularity::Method;
  if (s == "assertion") return Granularity::Assertion;
  raise_input("BadRow", "unknown granularity '" + s + "'");
}

std::string to_string(Granularity g) {
  switch (g) {
    case Granularity::Class: return "class";
    case Granularity::Method: return "method";
    case Granularity::Assertion: return "assertion";
  }
  return "method";
}

MeasurementDataset parse_measurements_csv(const std::string& text) {
  const auto lines = split_lines(text);
  if (lines.empty() ||
      lines[0] != "object_id,instrument_id,replicate,variable,value")
    raise_input("BadHeader",
                "expected header "
                "'object_id,instrument_id,replicate,variable,value'");
  std::vector<MeasurementRecord> records;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = split_line(lines[i]);
    if (fields.size() != 5)
      raise_input("BadRow", "line " + std::to_string(i + 1) + ": expected 5 "
                            "fields, got " + std::to_string(fields.size()));
    MeasurementRecord r;
    r.object_id = fields[0];
    r.instrument_id = fields[1];
    if (fields[2].empty()) {
      r.replicate = 0;
    } else {
      try {
        std::size_t pos = 0;
        r.replicate = std::stoi(fields[2], &pos);
        if (pos != fields[2].size() || r.replicate < 0) throw std::exception();
      } catch (const std::exception&) {
        raise_input("BadRow", "line " + std::to_string(i + 1) +
                                  ": bad replicate '" + fields[2] + "'");
      }
    }
    r.variable = fields[3];
    r.value = parse_double(fields[4], i + 1);
    records.push_back(std::move(r));
  }
  return MeasurementDataset::build(std::move(records));
}

std::string emit_measurements_csv(const MeasurementDataset& ds) {
  std::string out = "object_id,instrument_id,replicate,variable,value\n";
  char buf[40];
  for (const auto& r : ds.records()) {
    std::snprintf(buf, sizeof(buf), "%.17g", r.value);
    out += r.object_id + "," + r.instrument_id + "," +
           std::to_string(r.replicate) + "," + r.variable + "," + buf + "\n";
  }
  return out;
}

TestOutcomeMatrix parse_test_outcomes_csv(const std::string& text) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines[0] != "object_id,suite_id,case_id,granularity,outcome")
    raise_input("BadHeader",
                "expected header 'object_id,suite_id,case_id,granularity,outcome'");
  TestOutcomeMatrix m;
  std::set<std::tuple<std::string, std::string, std::string>> keys;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = split_line(lines[i]);
    if (fields.size() != 5)
      raise_input("BadRow", "line " + std::to_string(i + 1) + ": expected 5 "
                            "fields, got " + std::to_string(fields.size()));
    TestOutcomeEntry e;
    e.object_id = fields[0];
    e.suite_id = fields[1];
    e.case_id = fields[2];
    e.granularity = granularity_from_string(fields[3]);
    if (fields[4] == "pass")
      e.outcome = Outcome::Pass;
    else if (fields[4] == "fail")
      e.outcome = Outcome::Fail;
    else if (fields[4] == "error")
      e.outcome = Outcome::Error;
    else
      raise_input("UnknownOutcomeToken",
                  "line " + std::to_string(i + 1) + ": outcome '" + fields[4] +
                      "' is not pass/fail/error");
    if (!keys.insert({e.object_id, e.suite_id, e.case_id}).second)
      raise_input("DuplicateCase", "line " + std::to_string(i + 1) +
                                       ": duplicate case '" + e.case_id +
                                       "' for object '" + e.object_id +
                                       "', suite '" + e.suite_id + "'");
    m.entries.push_back(std::move(e));
  }
  return m;
}

ScoreSet score_outcomes(const TestOutcomeMatrix& m, Granularity granularity) {
  ScoreSet out;
  out.granularity = granularity;
  for (const auto& e : m.entries) {
    if (e.granularity != granularity) continue;
    auto& cell = out.scores[{e.object_id, e.suite_id}];
    cell.total += 1;
    switch (e.outcome) {
      case Outcome::Pass: cell.passed += 1; break;
      case Outcome::Fail: cell.failed += 1; break;
      case Outcome::Error: cell.errored += 1; break;
    }
  }
  if (out.scores.empty())
    raise_input("NoEntriesAtGranularity",
                "no entries at granularity '" + to_string(granularity) + "'");
  for (auto& [key, cell] : out.scores)
    cell.score = 100.0 * static_cast<double>(cell.passed) /
                 static_cast<double>(cell.total);
  return out;
}

MeasurementDataset scores_to_dataset(const ScoreSet& s,
                                     const std::string& variable) {
  std::vector<MeasurementRecord> records;
  for (const auto& [key, cell] : s.scores)
    records.push_back({key.first, key.second, 0, variable, cell.score});
  return MeasurementDataset::build(std::move(records));
}

}  // namespace accord
