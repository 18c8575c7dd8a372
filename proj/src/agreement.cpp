#include "accord/agreement.hpp"

#include <cmath>
#include <map>

#include "accord/error.hpp"
#include "accord/stats.hpp"

namespace accord {

BlandAltmanReport bland_altman(const PairedMeasurements& pm, double k) {
  const auto& pairs = pm.pairs;
  if (pairs.size() < 3)
    raise_input("TooFewPairs", "bland-altman needs at least 3 pairs");
  BlandAltmanReport rep;
  rep.instrument_a = pm.instrument_a;
  rep.instrument_b = pm.instrument_b;
  rep.k = k;
  std::vector<double> diffs;
  diffs.reserve(pairs.size());
  for (const auto& p : pairs) {
    const double d = p.value_a - p.value_b;
    diffs.push_back(d);
    rep.points.push_back({p.object_id, (p.value_a + p.value_b) / 2.0, d});
  }
  rep.d_bar = mean(diffs);
  rep.s_d = sample_sd(diffs);
  rep.lower_limit = rep.d_bar - k * rep.s_d;
  rep.upper_limit = rep.d_bar + k * rep.s_d;
  for (double d : diffs)
    if (d < rep.lower_limit || d > rep.upper_limit) rep.outside_count += 1;
  return rep;
}

AnovaTable twoway_anova(const MeasurementDataset& ds,
                        const std::string& variable) {
  std::map<std::string, std::pair<long, double>> row_acc;  // object
  std::map<std::string, std::pair<long, double>> col_acc;  // instrument
  std::map<std::pair<std::string, std::string>, double> cell;
  long n_total = 0;
  double grand_sum = 0.0;
  for (const auto& r : ds.records()) {
    if (r.variable != variable) continue;
    if (!cell.emplace(std::make_pair(r.object_id, r.instrument_id), r.value)
             .second)
      raise_input("IncompleteGrid",
                  "more than one observation in cell (object '" + r.object_id +
                      "', instrument '" + r.instrument_id + "')");
    auto& ra = row_acc[r.object_id];
    ra.first += 1;
    ra.second += r.value;
    auto& ca = col_acc[r.instrument_id];
    ca.first += 1;
    ca.second += r.value;
    n_total += 1;
    grand_sum += r.value;
  }
  const long n_obj = static_cast<long>(row_acc.size());
  const long n_inst = static_cast<long>(col_acc.size());
  if (n_obj < 2 || n_inst < 2)
    raise_input("TooFewLevels",
                "two-way anova needs >= 2 objects and >= 2 instruments");
  if (n_total != n_obj * n_inst)
    raise_input("IncompleteGrid", "grid is not complete (" +
                                      std::to_string(n_total) + " cells, " +
                                      std::to_string(n_obj * n_inst) +
                                      " expected)");
  const double grand_mean = grand_sum / static_cast<double>(n_total);

  double ss_program = 0.0;
  for (const auto& [obj, acc] : row_acc) {
    const double m = acc.second / static_cast<double>(acc.first);
    ss_program += n_inst * (m - grand_mean) * (m - grand_mean);
  }
  double ss_instrument = 0.0;
  for (const auto& [inst, acc] : col_acc) {
    const double m = acc.second / static_cast<double>(acc.first);
    ss_instrument += n_obj * (m - grand_mean) * (m - grand_mean);
  }
  double ss_total = 0.0;
  for (const auto& r : ds.records()) {
    if (r.variable != variable) continue;
    ss_total += (r.value - grand_mean) * (r.value - grand_mean);
  }
  double ss_resid = ss_total - ss_program - ss_instrument;
  if (ss_resid < 0.0) ss_resid = 0.0;

  AnovaRow instrument{"Instrument", n_inst - 1, ss_instrument, {}, {}, {}};
  AnovaRow program{"Program", n_obj - 1, ss_program, {}, {}, {}};
  AnovaRow resid{"Residual", (n_obj - 1) * (n_inst - 1), ss_resid, {}, {}, {}};
  if (instrument.df > 0) instrument.ms = instrument.ss / instrument.df;
  if (program.df > 0) program.ms = program.ss / program.df;
  if (resid.df > 0) {
    resid.ms = resid.ss / resid.df;
    if (*resid.ms > 0.0) {
      instrument.f = *instrument.ms / *resid.ms;
      instrument.p = f_pvalue(*instrument.f, static_cast<int>(instrument.df),
                              static_cast<int>(resid.df));
      program.f = *program.ms / *resid.ms;
      program.p = f_pvalue(*program.f, static_cast<int>(program.df),
                           static_cast<int>(resid.df));
    }
  }
  AnovaTable t;
  t.rows = {instrument, program, resid};
  return t;
}

IccReport icc3_1(const AnovaTable& anova, long n_obj) {
  const AnovaRow* instrument = anova.find("Instrument");
  const AnovaRow* program = anova.find("Program");
  const AnovaRow* resid = anova.find("Residual");
  if (!instrument || !program || !resid)
    raise_input("MissingTerm",
                "icc needs Instrument, Program and Residual rows");
  if (instrument->df <= 0 || program->df <= 0 || resid->df <= 0 ||
      !instrument->ms || !resid->ms)
    raise_input("MissingTerm", "icc needs positive df in all rows");
  IccReport rep;
  rep.anova = anova;
  rep.s2_e = *resid->ms;
  rep.s2_M = (*instrument->ms - *resid->ms) / static_cast<double>(n_obj);
  if (rep.s2_M < 0.0) {
    rep.s2_M = 0.0;
    rep.clamped = true;
  }
  const double denom = rep.s2_M + rep.s2_e;
  rep.rho = (denom > 0.0) ? rep.s2_M / denom : 0.0;
  rep.good_agreement = rep.rho >= 0.75;
  return rep;
}

}  // namespace accord
