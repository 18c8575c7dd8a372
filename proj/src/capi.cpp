#include "accord.h"

#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "accord/accuracy.hpp"
#include "accord/agreement.hpp"
#include "accord/core_data.hpp"
#include "accord/error.hpp"
#include "accord/ingestion.hpp"
#include "accord/mixed_model.hpp"
#include "accord/report.hpp"
#include "accord/simulate.hpp"
#include "accord/stats.hpp"

struct accord_dataset {
  accord::MeasurementDataset ds;
  std::string digest;
};

struct accord_report {
  std::string json;
  std::optional<accord::BlandAltmanReport> bland_altman;
  std::optional<accord::DeviationReport> deviation;
};

namespace {

thread_local std::string g_last_error;

accord_status status_from(const accord::Error& e) {
  g_last_error = e.what();
  switch (e.kind()) {
    case accord::ErrorKind::Input: return ACCORD_ERR_INPUT;
    case accord::ErrorKind::Numeric: return ACCORD_ERR_NUMERIC;
    case accord::ErrorKind::Io: return ACCORD_ERR_IO;
  }
  return ACCORD_ERR_INPUT;
}

template <typename Fn>
accord_status guarded(Fn&& fn) {
  try {
    fn();
    return ACCORD_OK;
  } catch (const accord::Error& e) {
    return status_from(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ACCORD_ERR_NUMERIC;
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

accord_status bad_argument(const char* msg) {
  g_last_error = msg;
  return ACCORD_ERR_INPUT;
}

std::map<std::string, double> parse_truth_csv(const std::string& text) {
  std::map<std::string, double> truth;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != "object_id,value")
        accord::raise_input("BadHeader", "expected header 'object_id,value'");
      continue;
    }
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      accord::raise_input("BadRow",
                          "line " + std::to_string(line_no) + ": expected 2 fields");
    try {
      std::size_t pos = 0;
      const std::string num = line.substr(comma + 1);
      const double v = std::stod(num, &pos);
      if (pos != num.size()) throw std::exception();
      truth[line.substr(0, comma)] = v;
    } catch (const std::exception&) {
      accord::raise_input("BadRow",
                          "line " + std::to_string(line_no) + ": bad value");
    }
  }
  return truth;
}

accord::PairedMeasurements make_pairs(const accord_dataset* ds,
                                      const char* variable,
                                      const char* instrument_a,
                                      const char* instrument_b) {
  std::string a = instrument_a ? instrument_a : "";
  std::string b = instrument_b ? instrument_b : "";
  if (a.empty() || b.empty()) {
    const auto instruments = ds->ds.instrument_ids();
    if (instruments.size() < 2)
      accord::raise_input("TooFewLevels",
                          "dataset has fewer than 2 instruments");
    if (a.empty()) a = instruments[0];
    if (b.empty()) b = instruments[1];
  }
  return accord::pair_by_object(ds->ds, a, b, variable);
}

}  // namespace

extern "C" {

const char* accord_version(void) { return accord::kToolVersion; }

const char* accord_last_error(void) { return g_last_error.c_str(); }

void accord_string_free(char* s) { delete[] s; }

accord_status accord_dataset_parse_csv(const char* text,
                                       accord_dataset** out) {
  if (!text || !out) return bad_argument("null argument");
  return guarded([&] {
    const std::string src(text);
    *out = new accord_dataset{accord::parse_measurements_csv(src),
                              accord::content_digest(src)};
  });
}

accord_status accord_dataset_read_csv(const char* path, accord_dataset** out) {
  if (!path || !out) return bad_argument("null argument");
  return guarded([&] {
    std::ifstream in(path, std::ios::binary);
    if (!in)
      accord::raise_io("IoFailure", std::string("cannot open '") + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string src = buf.str();
    *out = new accord_dataset{accord::parse_measurements_csv(src),
                              accord::content_digest(src)};
  });
}

void accord_dataset_free(accord_dataset* ds) { delete ds; }

size_t accord_dataset_size(const accord_dataset* ds) {
  return ds ? ds->ds.size() : 0;
}

accord_status accord_dataset_emit_csv(const accord_dataset* ds, char** out) {
  if (!ds || !out) return bad_argument("null argument");
  return guarded([&] { *out = dup_string(accord::emit_measurements_csv(ds->ds)); });
}

accord_status accord_score(const char* outcomes_csv, const char* granularity,
                           accord_report** out) {
  if (!outcomes_csv || !granularity || !out)
    return bad_argument("null argument");
  return guarded([&] {
    const std::string src(outcomes_csv);
    const auto matrix = accord::parse_test_outcomes_csv(src);
    const auto scores = accord::score_outcomes(
        matrix, accord::granularity_from_string(granularity));
    auto rep = std::make_unique<accord_report>();
    rep->json = accord::render_report(
        "score", accord::content_digest(src),
        {{"score", accord::scores_to_json(scores)}}, {});
    *out = rep.release();
  });
}

accord_status accord_accuracy(const accord_dataset* ds, const char* variable,
                              const char* coverage_mode, double alpha,
                              double s_r, int has_reference, double reference,
                              const char* truth_csv, double epsilon,
                              accord_report** out) {
  if (!ds || !variable || !coverage_mode || !out)
    return bad_argument("null argument");
  return guarded([&] {
    const auto mode = accord::coverage_mode_from_string(coverage_mode);
    std::optional<double> ref;
    if (has_reference) ref = reference;
    const auto acc =
        accord::accuracy_analysis(ds->ds, variable, s_r, alpha, mode, ref);
    auto rep = std::make_unique<accord_report>();
    std::vector<std::pair<std::string, accord::Json>> sections;
    sections.emplace_back("accuracy", accord::accuracy_to_json(acc));
    std::vector<std::string> warnings = acc.warnings;
    if (truth_csv) {
      const auto truth = parse_truth_csv(truth_csv);
      std::vector<std::pair<std::string, double>> measured;
      for (const auto& r : ds->ds.records())
        if (r.variable == variable)
          measured.emplace_back(r.object_id, r.value);
      const auto dev =
          accord::deviations_from_reference(measured, truth, epsilon);
      sections.emplace_back("deviation", accord::deviation_to_json(dev));
      rep->deviation = dev;
    }
    rep->json = accord::render_report("accuracy", ds->digest,
                                      std::move(sections), warnings);
    *out = rep.release();
  });
}

accord_status accord_bland_altman(const accord_dataset* ds,
                                  const char* variable,
                                  const char* instrument_a,
                                  const char* instrument_b, double k,
                                  accord_report** out) {
  if (!ds || !variable || !out) return bad_argument("null argument");
  return guarded([&] {
    const auto pairs = make_pairs(ds, variable, instrument_a, instrument_b);
    const auto ba = accord::bland_altman(pairs, k);
    auto rep = std::make_unique<accord_report>();
    rep->bland_altman = ba;
    rep->json = accord::render_report(
        "bland_altman", ds->digest,
        {{"bland_altman", accord::bland_altman_to_json(ba)}}, {});
    *out = rep.release();
  });
}

accord_status accord_icc(const accord_dataset* ds, const char* variable,
                         accord_report** out) {
  if (!ds || !variable || !out) return bad_argument("null argument");
  return guarded([&] {
    const auto anova = accord::twoway_anova(ds->ds, variable);
    const long n_obj = static_cast<long>(ds->ds.object_ids().size());
    const auto icc = accord::icc3_1(anova, n_obj);
    std::vector<std::string> warnings;
    if (icc.clamped)
      warnings.push_back("negative between-method variance clamped to 0");
    auto rep = std::make_unique<accord_report>();
    rep->json = accord::render_report(
        "icc", ds->digest, {{"icc", accord::icc_to_json(icc)}}, warnings);
    *out = rep.release();
  });
}

accord_status accord_correlate(const accord_dataset* ds, const char* variable,
                               const char* instrument_a,
                               const char* instrument_b,
                               accord_report** out) {
  if (!ds || !variable || !out) return bad_argument("null argument");
  return guarded([&] {
    const auto pairs = make_pairs(ds, variable, instrument_a, instrument_b);
    const auto corr = accord::pearson(pairs);
    auto rep = std::make_unique<accord_report>();
    rep->json = accord::render_report(
        "correlation", ds->digest,
        {{"correlation", accord::correlation_to_json(corr)}}, {});
    *out = rep.release();
  });
}

accord_status accord_mixed(const char* experiment_csv, const char* variable,
                           accord_report** out) {
  if (!experiment_csv || !variable || !out)
    return bad_argument("null argument");
  return guarded([&] {
    const std::string src(experiment_csv);
    const auto rows = accord::parse_experiment_csv(src, variable);
    if (rows.empty())
      accord::raise_input("EmptyInput", std::string("no rows for variable '") +
                                            variable + "'");
    const auto fit = accord::reml_fit(rows);
    const auto summary = accord::summarize_fit(fit);
    auto rep = std::make_unique<accord_report>();
    rep->json = accord::render_report(
        "mixed_model", accord::content_digest(src),
        {{"mixed_model", accord::mixed_fit_to_json(fit, summary)}}, {});
    *out = rep.release();
  });
}

accord_status accord_simulate(const char* spec_json, const char* estimator,
                              int n_reps, accord_report** out) {
  if (!spec_json || !estimator || !out) return bad_argument("null argument");
  return guarded([&] {
    const std::string src(spec_json);
    const auto spec = accord::process_spec_from_json(src);
    const auto summary = accord::monte_carlo(spec, estimator, n_reps);
    auto rep = std::make_unique<accord_report>();
    rep->json = accord::render_report(
        "simulation", accord::content_digest(src),
        {{"simulation", accord::monte_carlo_to_json(summary)}}, {});
    *out = rep.release();
  });
}

const char* accord_report_json(const accord_report* rep) {
  return rep ? rep->json.c_str() : "";
}

int accord_report_has_plot(const accord_report* rep) {
  return rep && (rep->bland_altman || rep->deviation) ? 1 : 0;
}

accord_status accord_report_svg(const accord_report* rep, char** out) {
  if (!rep || !out) return bad_argument("null argument");
  return guarded([&] {
    if (rep->bland_altman)
      *out = dup_string(accord::bland_altman_svg(*rep->bland_altman));
    else if (rep->deviation)
      *out = dup_string(accord::deviation_svg(*rep->deviation));
    else
      accord::raise_input("BadRow", "report has no plottable data");
  });
}

accord_status accord_report_points_csv(const accord_report* rep, char** out) {
  if (!rep || !out) return bad_argument("null argument");
  return guarded([&] {
    if (rep->bland_altman)
      *out = dup_string(accord::bland_altman_points_csv(*rep->bland_altman));
    else if (rep->deviation)
      *out = dup_string(accord::deviation_points_csv(*rep->deviation));
    else
      accord::raise_input("BadRow", "report has no plottable data");
  });
}

void accord_report_free(accord_report* rep) { delete rep; }

}  // extern "C"
