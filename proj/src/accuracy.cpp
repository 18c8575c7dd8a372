#include "accord/accuracy.hpp"

#include <cmath>
#include <map>

#include "accord/error.hpp"
#include "accord/stats.hpp"

namespace accord {

CoverageMode coverage_mode_from_string(const std::string& s) {
  if (s == "t") return CoverageMode::StudentT;
  if (s == "normal") return CoverageMode::Normal;
  if (s == "fixed2") return CoverageMode::Fixed2;
  raise_input("BadRow", "unknown coverage mode '" + s + "'");
}

std::string to_string(CoverageMode m) {
  switch (m) {
    case CoverageMode::StudentT: return "t";
    case CoverageMode::Normal: return "normal";
    case CoverageMode::Fixed2: return "fixed2";
  }
  return "fixed2";
}

double repeatability(const std::vector<double>& values) {
  if (values.empty()) raise_input("EmptyInput", "no values");
  if (values.size() == 1) return 0.0;
  return sample_sd(values);
}

double trueness(const std::vector<double>& values, double reference) {
  if (values.empty()) raise_input("EmptyInput", "no values");
  if (!std::isfinite(reference))
    raise_input("NonFiniteValue", "reference is not finite");
  return mean(values) - reference;
}

AnovaTable nested_anova(const MeasurementDataset& ds,
                        const std::string& variable) {
  const auto instruments = ds.instrument_ids();
  // cell -> (count, sum); object -> (count, sum)
  std::map<std::pair<std::string, std::string>, std::pair<long, double>> cells;
  std::map<std::string, std::pair<long, double>> per_object;
  long n_total = 0;
  double grand_sum = 0.0;
  for (const auto& r : ds.records()) {
    if (r.variable != variable) continue;
    auto& c = cells[{r.object_id, r.instrument_id}];
    c.first += 1;
    c.second += r.value;
    auto& o = per_object[r.object_id];
    o.first += 1;
    o.second += r.value;
    n_total += 1;
    grand_sum += r.value;
  }
  if (per_object.size() < 2 || instruments.size() < 2)
    raise_input("TooFewLevels",
                "nested anova needs >= 2 objects and >= 2 instruments");
  std::vector<std::string> used_instruments;
  for (const auto& inst : instruments)
    for (const auto& [obj, acc] : per_object)
      if (cells.count({obj, inst})) {
        used_instruments.push_back(inst);
        break;
      }
  if (used_instruments.size() < 2)
    raise_input("TooFewLevels",
                "nested anova needs >= 2 objects and >= 2 instruments");
  for (const auto& [obj, acc] : per_object)
    for (const auto& inst : used_instruments)
      if (!cells.count({obj, inst}))
        raise_input("UnbalancedDesign", "object '" + obj +
                                            "' has no value for instrument '" +
                                            inst + "'");
  const double grand_mean = grand_sum / static_cast<double>(n_total);
  const long n_obj = static_cast<long>(per_object.size());
  const long n_inst = static_cast<long>(used_instruments.size());

  double ss_program = 0.0;
  for (const auto& [obj, acc] : per_object) {
    const double om = acc.second / static_cast<double>(acc.first);
    ss_program += acc.first * (om - grand_mean) * (om - grand_mean);
  }
  double ss_pi = 0.0;
  for (const auto& [key, acc] : cells) {
    const double cm = acc.second / static_cast<double>(acc.first);
    const double om = per_object[key.first].second /
                      static_cast<double>(per_object[key.first].first);
    ss_pi += acc.first * (cm - om) * (cm - om);
  }
  double ss_resid = 0.0;
  for (const auto& r : ds.records()) {
    if (r.variable != variable) continue;
    const auto& acc = cells[{r.object_id, r.instrument_id}];
    const double cm = acc.second / static_cast<double>(acc.first);
    ss_resid += (r.value - cm) * (r.value - cm);
  }

  AnovaTable t;
  AnovaRow program{"Program", n_obj - 1, ss_program, {}, {}, {}};
  AnovaRow pi{"Program:Instrument", n_obj * (n_inst - 1), ss_pi, {}, {}, {}};
  AnovaRow resid{"Residual", n_total - n_obj * n_inst, ss_resid, {}, {}, {}};
  if (program.df > 0) program.ms = program.ss / program.df;
  if (pi.df > 0) pi.ms = pi.ss / pi.df;
  if (resid.df > 0) {
    resid.ms = resid.ss / resid.df;
    if (*resid.ms > 0.0) {
      if (program.ms) {
        program.f = *program.ms / *resid.ms;
        program.p = f_pvalue(*program.f, static_cast<int>(program.df),
                             static_cast<int>(resid.df));
      }
      if (pi.ms) {
        pi.f = *pi.ms / *resid.ms;
        pi.p = f_pvalue(*pi.f, static_cast<int>(pi.df),
                        static_cast<int>(resid.df));
      }
    }
  }
  t.rows = {program, pi, resid};
  return t;
}

IntermediatePrecision intermediate_precision(const AnovaTable& anova,
                                             double s_r) {
  const AnovaRow* pi = anova.find("Program:Instrument");
  if (!pi) raise_input("MissingTerm", "no Program:Instrument row");
  if (pi->df <= 0 || !pi->ms)
    raise_input("ZeroDf", "Program:Instrument has no degrees of freedom");
  IntermediatePrecision out;
  out.s_M = std::sqrt(*pi->ms);
  out.s_Rw = std::sqrt(out.s_M * out.s_M + s_r * s_r);
  return out;
}

ExpandedUncertainty expanded_uncertainty(double s, int n, double alpha,
                                         CoverageMode mode) {
  if (s < 0.0) raise_input("BadRow", "standard uncertainty must be >= 0");
  ExpandedUncertainty out;
  switch (mode) {
    case CoverageMode::StudentT:
      if (n < 3)
        raise_input("TooFewSamples", "t coverage needs n >= 3");
      out.k = t_quantile(1.0 - alpha / 2.0, n - 2);
      break;
    case CoverageMode::Normal:
      out.k = normal_quantile(1.0 - alpha / 2.0);
      break;
    case CoverageMode::Fixed2:
      out.k = 2.0;
      break;
  }
  out.expanded = out.k * s;
  return out;
}

AccuracyReport accuracy_analysis(const MeasurementDataset& ds,
                                 const std::string& variable, double s_r,
                                 double alpha, CoverageMode mode,
                                 std::optional<double> reference) {
  AccuracyReport rep;
  rep.s_r = s_r;
  rep.alpha = alpha;
  rep.mode = mode;
  rep.anova = nested_anova(ds, variable);
  const auto ip = intermediate_precision(rep.anova, s_r);
  rep.s_M = ip.s_M;
  rep.s_Rw = ip.s_Rw;
  const AnovaRow* resid = rep.anova.find("Residual");
  if (resid && resid->df > 0)
    rep.warnings.push_back(
        "residual df > 0: s_M^2 uses MS(Program:Instrument) directly; a "
        "components-of-variance correction would subtract the residual "
        "expectation");
  const int n = static_cast<int>(ds.object_ids().size());
  const auto eu = expanded_uncertainty(rep.s_Rw, n, alpha, mode);
  rep.coverage_k = eu.k;
  rep.expanded = eu.expanded;
  if (reference) {
    std::vector<double> vals;
    for (const auto& r : ds.records())
      if (r.variable == variable) vals.push_back(r.value);
    rep.trueness = trueness(vals, *reference);
  }
  return rep;
}

DeviationReport deviations_from_reference(
    const std::vector<std::pair<std::string, double>>& measured,
    const std::map<std::string, double>& truth, double epsilon) {
  if (epsilon < 0.0) raise_input("BadRow", "epsilon must be >= 0");
  DeviationReport rep;
  rep.epsilon = epsilon;
  double dev_sum = 0.0;
  for (const auto& [obj, value] : measured) {
    auto it = truth.find(obj);
    if (it == truth.end())
      raise_input("MissingTruth", "no truth value for object '" + obj + "'");
    rep.points.push_back({obj, it->second, value});
    const double d = value - it->second;
    dev_sum += d;
    if (d > epsilon)
      rep.above += 1;
    else if (d < -epsilon)
      rep.below += 1;
    else
      rep.on_diagonal += 1;
  }
  if (rep.points.empty()) raise_input("EmptyInput", "no measured values");
  rep.mean_deviation = dev_sum / static_cast<double>(rep.points.size());
  return rep;
}

}  // namespace accord
