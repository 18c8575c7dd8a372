#include "accord/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "accord/error.hpp"

namespace accord {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_fixed(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

void escape_into(std::string& out, const std::string& s) {
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
}

}  // namespace

Json Json::object() {
  Json j;
  j.kind_ = Kind::Obj;
  return j;
}
Json Json::array() {
  Json j;
  j.kind_ = Kind::Arr;
  return j;
}
Json Json::str(std::string v) {
  Json j;
  j.kind_ = Kind::Str;
  j.str_v_ = std::move(v);
  return j;
}
Json Json::num(double v) {
  Json j;
  j.kind_ = Kind::Num;
  j.num_v_ = v;
  return j;
}
Json Json::integer(long long v) {
  Json j;
  j.kind_ = Kind::Int;
  j.int_v_ = v;
  return j;
}
Json Json::boolean(bool v) {
  Json j;
  j.kind_ = Kind::Bool;
  j.bool_v_ = v;
  return j;
}
Json Json::null() { return Json(); }

Json& Json::set(const std::string& key, Json v) {
  obj_v_.emplace_back(key, std::move(v));
  return *this;
}

Json& Json::push(Json v) {
  arr_v_.push_back(std::move(v));
  return *this;
}

void Json::dump_to(std::string& out, int indent, int depth) const {
  const std::string pad =
      indent > 0 ? std::string(static_cast<std::size_t>(indent) * (depth + 1), ' ')
                 : "";
  const std::string close_pad =
      indent > 0 ? std::string(static_cast<std::size_t>(indent) * depth, ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  const char* colon = indent > 0 ? ": " : ":";
  switch (kind_) {
    case Kind::Null: out += "null"; break;
    case Kind::Bool: out += bool_v_ ? "true" : "false"; break;
    case Kind::Int: out += std::to_string(int_v_); break;
    case Kind::Num: out += fmt_double(num_v_); break;
    case Kind::Str:
      out += '"';
      escape_into(out, str_v_);
      out += '"';
      break;
    case Kind::Arr: {
      if (arr_v_.empty()) {
        out += "[]";
        break;
      }
      out += '[';
      for (std::size_t i = 0; i < arr_v_.size(); ++i) {
        if (i) out += ',';
        out += nl;
        out += pad;
        arr_v_[i].dump_to(out, indent, depth + 1);
      }
      out += nl;
      out += close_pad;
      out += ']';
      break;
    }
    case Kind::Obj: {
      if (obj_v_.empty()) {
        out += "{}";
        break;
      }
      out += '{';
      for (std::size_t i = 0; i < obj_v_.size(); ++i) {
        if (i) out += ',';
        out += nl;
        out += pad;
        out += '"';
        escape_into(out, obj_v_[i].first);
        out += '"';
        out += colon;
        obj_v_[i].second.dump_to(out, indent, depth + 1);
      }
      out += nl;
      out += close_pad;
      out += '}';
      break;
    }
  }
}

std::string Json::dump(int indent) const {
  std::string out;
  dump_to(out, indent, 0);
  return out;
}

std::string content_digest(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

Json anova_to_json(const AnovaTable& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    Json row = Json::object();
    row.set("term", Json::str(r.term));
    row.set("df", Json::integer(r.df));
    row.set("ss", Json::num(r.ss));
    row.set("ms", r.ms ? Json::num(*r.ms) : Json::null());
    row.set("f", r.f ? Json::num(*r.f) : Json::null());
    row.set("p", r.p ? Json::num(*r.p) : Json::null());
    rows.push(std::move(row));
  }
  return rows;
}

Json accuracy_to_json(const AccuracyReport& r) {
  Json j = Json::object();
  j.set("s_r", Json::num(r.s_r));
  j.set("trueness", r.trueness ? Json::num(*r.trueness) : Json::null());
  j.set("s_M", Json::num(r.s_M));
  j.set("s_Rw", Json::num(r.s_Rw));
  j.set("coverage_mode", Json::str(to_string(r.mode)));
  j.set("coverage_k", Json::num(r.coverage_k));
  j.set("alpha", Json::num(r.alpha));
  j.set("expanded_uncertainty", Json::num(r.expanded));
  j.set("anova", anova_to_json(r.anova));
  return j;
}

Json bland_altman_to_json(const BlandAltmanReport& r) {
  Json j = Json::object();
  j.set("instrument_a", Json::str(r.instrument_a));
  j.set("instrument_b", Json::str(r.instrument_b));
  j.set("mean_difference", Json::num(r.d_bar));
  j.set("sd_difference", Json::num(r.s_d));
  j.set("k", Json::num(r.k));
  j.set("lower_limit", Json::num(r.lower_limit));
  j.set("upper_limit", Json::num(r.upper_limit));
  j.set("outside_count", Json::integer(r.outside_count));
  Json points = Json::array();
  for (const auto& p : r.points) {
    Json point = Json::object();
    point.set("object_id", Json::str(p.object_id));
    point.set("pair_mean", Json::num(p.pair_mean));
    point.set("difference", Json::num(p.difference));
    points.push(std::move(point));
  }
  j.set("points", std::move(points));
  return j;
}

Json icc_to_json(const IccReport& r) {
  Json j = Json::object();
  j.set("anova", anova_to_json(r.anova));
  j.set("s2_M", Json::num(r.s2_M));
  j.set("s2_e", Json::num(r.s2_e));
  j.set("rho", Json::num(r.rho));
  j.set("clamped", Json::boolean(r.clamped));
  j.set("good_agreement", Json::boolean(r.good_agreement));
  return j;
}

Json correlation_to_json(const CorrelationResult& r) {
  Json j = Json::object();
  j.set("r", Json::num(r.r));
  j.set("n", Json::integer(r.n));
  j.set("t_stat", Json::num(r.t_stat));
  j.set("p_two_sided", Json::num(r.p_two_sided));
  return j;
}

Json mixed_fit_to_json(const MixedModelFit& fit,
                       const std::vector<CoefficientSummary>& summary) {
  Json j = Json::object();
  Json coefs = Json::array();
  for (const auto& s : summary) {
    Json c = Json::object();
    c.set("term", Json::str(s.term));
    c.set("estimate", Json::num(s.estimate));
    c.set("std_error", Json::num(s.std_error));
    c.set("z", Json::num(s.z));
    c.set("p", Json::num(s.p));
    c.set("stars", Json::str(s.stars));
    coefs.push(std::move(c));
  }
  j.set("coefficients", std::move(coefs));
  j.set("var_subject", Json::num(fit.var_subject));
  j.set("var_residual", Json::num(fit.var_residual));
  j.set("reml_criterion", Json::num(fit.reml_criterion));
  j.set("aic", Json::num(fit.aic));
  j.set("n_obs", Json::integer(fit.n_obs));
  j.set("n_subjects", Json::integer(fit.n_subjects));
  j.set("p_value_method", Json::str("wald-normal"));
  return j;
}

Json scores_to_json(const ScoreSet& s) {
  Json j = Json::object();
  j.set("granularity", Json::str(to_string(s.granularity)));
  Json rows = Json::array();
  for (const auto& [key, cell] : s.scores) {
    Json row = Json::object();
    row.set("object_id", Json::str(key.first));
    row.set("suite_id", Json::str(key.second));
    row.set("score", Json::num(cell.score));
    row.set("passed", Json::integer(cell.passed));
    row.set("failed", Json::integer(cell.failed));
    row.set("errored", Json::integer(cell.errored));
    row.set("total", Json::integer(cell.total));
    rows.push(std::move(row));
  }
  j.set("scores", std::move(rows));
  return j;
}

Json deviation_to_json(const DeviationReport& r) {
  Json j = Json::object();
  j.set("mean_deviation", Json::num(r.mean_deviation));
  j.set("epsilon", Json::num(r.epsilon));
  j.set("above", Json::integer(r.above));
  j.set("below", Json::integer(r.below));
  j.set("on_diagonal", Json::integer(r.on_diagonal));
  Json points = Json::array();
  for (const auto& p : r.points) {
    Json point = Json::object();
    point.set("object_id", Json::str(p.object_id));
    point.set("true_value", Json::num(p.true_value));
    point.set("measured_value", Json::num(p.measured_value));
    points.push(std::move(point));
  }
  j.set("points", std::move(points));
  return j;
}

Json monte_carlo_to_json(const MonteCarloSummary& s) {
  Json j = Json::object();
  j.set("estimator", Json::str(s.estimator));
  j.set("n_reps", Json::integer(s.n_reps));
  j.set("mean", Json::num(s.mean));
  j.set("sd", Json::num(s.sd));
  j.set("min", Json::num(s.min));
  j.set("q25", Json::num(s.q25));
  j.set("median", Json::num(s.median));
  j.set("q75", Json::num(s.q75));
  j.set("max", Json::num(s.max));
  return j;
}

std::string render_report(const std::string& analysis,
                          const std::string& input_digest,
                          std::vector<std::pair<std::string, Json>> sections,
                          const std::vector<std::string>& warnings) {
  Json j = Json::object();
  j.set("tool_version", Json::str(kToolVersion));
  j.set("input_digest", Json::str(input_digest));
  j.set("analysis", Json::str(analysis));
  for (auto& [name, section] : sections) j.set(name, std::move(section));
  Json warn = Json::array();
  for (const auto& w : warnings) warn.push(Json::str(w));
  j.set("warnings", std::move(warn));
  return j.dump(2) + "\n";
}

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 60.0;

struct Scale {
  double lo, hi;
  double px_lo, px_hi;
  double operator()(double v) const {
    const double t = (v - lo) / (hi - lo);
    return px_lo + t * (px_hi - px_lo);
  }
};

std::string svg_header() {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 640 480\" "
         "width=\"640\" height=\"480\">\n";
}

std::string frame_and_labels(const std::string& x_label,
                             const std::string& y_label) {
  std::string s;
  s += "<rect x=\"" + fmt_fixed(kMargin) + "\" y=\"" + fmt_fixed(kMargin) +
       "\" width=\"" + fmt_fixed(kWidth - 2 * kMargin) + "\" height=\"" +
       fmt_fixed(kHeight - 2 * kMargin) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  s += "<text x=\"" + fmt_fixed(kWidth / 2) + "\" y=\"" +
       fmt_fixed(kHeight - 15) + "\" text-anchor=\"middle\">" + x_label +
       "</text>\n";
  s += "<text x=\"18\" y=\"" + fmt_fixed(kHeight / 2) +
       "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
       fmt_fixed(kHeight / 2) + ")\">" + y_label + "</text>\n";
  return s;
}

}  // namespace

std::string bland_altman_svg(const BlandAltmanReport& r) {
  if (r.points.empty()) raise_input("EmptyInput", "no points to plot");
  double x_lo = r.points[0].pair_mean, x_hi = x_lo;
  double y_lo = std::min(r.lower_limit, r.points[0].difference);
  double y_hi = std::max(r.upper_limit, r.points[0].difference);
  for (const auto& p : r.points) {
    x_lo = std::min(x_lo, p.pair_mean);
    x_hi = std::max(x_hi, p.pair_mean);
    y_lo = std::min(y_lo, p.difference);
    y_hi = std::max(y_hi, p.difference);
  }
  const double x_pad = (x_hi - x_lo) > 0 ? 0.05 * (x_hi - x_lo) : 1.0;
  const double y_pad = (y_hi - y_lo) > 0 ? 0.05 * (y_hi - y_lo) : 1.0;
  Scale sx{x_lo - x_pad, x_hi + x_pad, kMargin, kWidth - kMargin};
  Scale sy{y_lo - y_pad, y_hi + y_pad, kHeight - kMargin, kMargin};

  std::string s = svg_header();
  s += frame_and_labels("Pair mean", "Difference (" + r.instrument_a + " - " +
                                         r.instrument_b + ")");
  for (double level : {r.d_bar, r.lower_limit, r.upper_limit}) {
    const std::string y = fmt_fixed(sy(level));
    s += "<line x1=\"" + fmt_fixed(kMargin) + "\" y1=\"" + y + "\" x2=\"" +
         fmt_fixed(kWidth - kMargin) + "\" y2=\"" + y +
         "\" stroke=\"black\" stroke-dasharray=\"6,3\"/>\n";
  }
  for (const auto& p : r.points)
    s += "<circle cx=\"" + fmt_fixed(sx(p.pair_mean)) + "\" cy=\"" +
         fmt_fixed(sy(p.difference)) + "\" r=\"3\" fill=\"steelblue\"/>\n";
  s += "</svg>\n";
  return s;
}

std::string deviation_svg(const DeviationReport& r) {
  if (r.points.empty()) raise_input("EmptyInput", "no points to plot");
  Scale sx{0.0, 100.0, kMargin, kWidth - kMargin};
  Scale sy{0.0, 100.0, kHeight - kMargin, kMargin};
  auto clamp01 = [](double v) { return std::clamp(v, 0.0, 100.0); };
  std::string s = svg_header();
  s += frame_and_labels("Reference value", "Measured value");
  // identity diagonal
  s += "<line x1=\"" + fmt_fixed(sx(0.0)) + "\" y1=\"" + fmt_fixed(sy(0.0)) +
       "\" x2=\"" + fmt_fixed(sx(100.0)) + "\" y2=\"" + fmt_fixed(sy(100.0)) +
       "\" stroke=\"black\"/>\n";
  for (const auto& p : r.points)
    s += "<circle cx=\"" + fmt_fixed(sx(clamp01(p.true_value))) + "\" cy=\"" +
         fmt_fixed(sy(clamp01(p.measured_value))) +
         "\" r=\"3\" fill=\"firebrick\"/>\n";
  s += "</svg>\n";
  return s;
}

std::string bland_altman_points_csv(const BlandAltmanReport& r) {
  std::string out = "pair_mean,difference,object_id\n";
  for (const auto& p : r.points)
    out += fmt_double(p.pair_mean) + "," + fmt_double(p.difference) + "," +
           p.object_id + "\n";
  return out;
}

std::string deviation_points_csv(const DeviationReport& r) {
  std::string out = "true_value,measured_value,object_id\n";
  for (const auto& p : r.points)
    out += fmt_double(p.true_value) + "," + fmt_double(p.measured_value) +
           "," + p.object_id + "\n";
  return out;
}

}  // namespace accord
