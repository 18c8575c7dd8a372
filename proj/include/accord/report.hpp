#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "accord/accuracy.hpp"
#include "accord/agreement.hpp"
#include "accord/ingestion.hpp"
#include "accord/mixed_model.hpp"
#include "accord/simulate.hpp"
#include "accord/stats.hpp"

namespace accord {

inline constexpr const char* kToolVersion = "0.1.0";

// Minimal ordered JSON value. Object keys keep insertion order and doubles
// are printed with 17 significant digits, so serialization is deterministic
// and round-trips exactly.
class Json {
 public:
  static Json object();
  static Json array();
  static Json str(std::string v);
  static Json num(double v);
  static Json integer(long long v);
  static Json boolean(bool v);
  static Json null();

  Json& set(const std::string& key, Json v);  // object only
  Json& push(Json v);                         // array only

  std::string dump(int indent = 0) const;

 private:
  enum class Kind { Null, Bool, Int, Num, Str, Arr, Obj };
  Kind kind_ = Kind::Null;
  bool bool_v_ = false;
  long long int_v_ = 0;
  double num_v_ = 0.0;
  std::string str_v_;
  std::vector<Json> arr_v_;
  std::vector<std::pair<std::string, Json>> obj_v_;

  void dump_to(std::string& out, int indent, int depth) const;
};

// FNV-1a 64-bit content hash, 16 hex digits.
std::string content_digest(const std::string& bytes);

Json anova_to_json(const AnovaTable& t);
Json accuracy_to_json(const AccuracyReport& r);
Json bland_altman_to_json(const BlandAltmanReport& r);
Json icc_to_json(const IccReport& r);
Json correlation_to_json(const CorrelationResult& r);
Json mixed_fit_to_json(const MixedModelFit& fit,
                       const std::vector<CoefficientSummary>& summary);
Json scores_to_json(const ScoreSet& s);
Json deviation_to_json(const DeviationReport& r);
Json monte_carlo_to_json(const MonteCarloSummary& s);

// Top-level AnalysisReport wrapper:
// { tool_version, input_digest, analysis, <section>..., warnings }
std::string render_report(const std::string& analysis,
                          const std::string& input_digest,
                          std::vector<std::pair<std::string, Json>> sections,
                          const std::vector<std::string>& warnings);

// 640x480 scatter with the mean-difference line and the two agreement
// limits (exactly 3 horizontal lines).
std::string bland_altman_svg(const BlandAltmanReport& r);

// True-vs-measured scatter with the identity diagonal; axes span [0, 100].
std::string deviation_svg(const DeviationReport& r);

// "pair_mean,difference,object_id" rows.
std::string bland_altman_points_csv(const BlandAltmanReport& r);
// "true_value,measured_value,object_id" rows.
std::string deviation_points_csv(const DeviationReport& r);

}  // namespace accord
