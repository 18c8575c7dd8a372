#include "accord/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

#include "accord/accuracy.hpp"
#include "accord/agreement.hpp"
#include "accord/error.hpp"
#include "accord/stats.hpp"

namespace accord {

namespace {

void validate(const ProcessSpec& spec) {
  if (spec.n_objects < 2)
    raise_input("BadSpec", "n_objects must be >= 2");
  if (spec.instruments.empty())
    raise_input("BadSpec", "at least one instrument required");
  if (spec.replicates < 1)
    raise_input("BadSpec", "replicates must be >= 1");
  for (double s :
       {spec.sigma_object, spec.sigma_interaction, spec.sigma_noise})
    if (!(s >= 0.0) || !std::isfinite(s))
      raise_input("BadSpec", "sigmas must be finite and >= 0");
}

}  // namespace

ProcessSpec process_spec_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    raise_input("BadSpec", std::string("invalid JSON: ") + e.what());
  }
  ProcessSpec spec;
  try {
    spec.n_objects = j.at("n_objects").get<int>();
    for (const auto& inst : j.at("instruments"))
      spec.instruments.push_back({inst.at("id").get<std::string>(),
                                  inst.at("bias").get<double>()});
    spec.sigma_object = j.at("sigma_object").get<double>();
    spec.sigma_interaction = j.at("sigma_interaction").get<double>();
    spec.sigma_noise = j.at("sigma_noise").get<double>();
    spec.replicates = j.value("replicates", 1);
    spec.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    raise_input("BadSpec", std::string("bad process spec: ") + e.what());
  }
  validate(spec);
  return spec;
}

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() {
  // 53-bit mantissa, strictly inside (0, 1)
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double SplitMix64::normal() { return normal_quantile(uniform()); }

MeasurementDataset gen_dataset(const ProcessSpec& spec) {
  validate(spec);
  SplitMix64 rng(spec.seed);
  std::vector<MeasurementRecord> records;
  records.reserve(static_cast<std::size_t>(spec.n_objects) *
                  spec.instruments.size() * spec.replicates);
  for (int i = 0; i < spec.n_objects; ++i) {
    const std::string object_id = "P" + std::to_string(i + 1);
    const double o = spec.sigma_object * rng.normal();
    for (const auto& inst : spec.instruments) {
      const double g = spec.sigma_interaction * rng.normal();
      for (int r = 0; r < spec.replicates; ++r) {
        const double e = spec.sigma_noise * rng.normal();
        records.push_back(
            {object_id, inst.id, r, "QLTY", 50.0 + o + inst.bias + g + e});
      }
    }
  }
  return MeasurementDataset::build(std::move(records));
}

MeasurementDataset aggregate_replicates(const MeasurementDataset& ds,
                                        const std::string& variable) {
  std::vector<std::pair<std::string, std::string>> order;
  std::map<std::pair<std::string, std::string>, std::pair<long, double>> acc;
  for (const auto& r : ds.records()) {
    if (r.variable != variable) continue;
    auto key = std::make_pair(r.object_id, r.instrument_id);
    auto [it, inserted] = acc.emplace(key, std::make_pair(0L, 0.0));
    if (inserted) order.push_back(key);
    it->second.first += 1;
    it->second.second += r.value;
  }
  std::vector<MeasurementRecord> records;
  for (const auto& key : order) {
    const auto& a = acc[key];
    records.push_back({key.first, key.second, 0, variable,
                       a.second / static_cast<double>(a.first)});
  }
  return MeasurementDataset::build(std::move(records));
}

double run_estimator(const std::string& estimator, const ProcessSpec& spec,
                     const MeasurementDataset& ds) {
  if (estimator == "trueness") {
    std::vector<double> vals;
    for (const auto& r : ds.records()) vals.push_back(r.value);
    return mean(vals) - 50.0;
  }
  if (estimator == "repeatability") {
    // mean of per-cell sample sds
    std::map<std::pair<std::string, std::string>, std::vector<double>> cells;
    for (const auto& r : ds.records())
      cells[{r.object_id, r.instrument_id}].push_back(r.value);
    double sum = 0.0;
    long n = 0;
    for (const auto& [key, vals] : cells) {
      if (vals.size() < 2) return 0.0;
      sum += sample_sd(vals);
      n += 1;
    }
    return sum / static_cast<double>(n);
  }
  if (estimator == "s_M" || estimator == "s_M2") {
    const auto anova = nested_anova(ds, "QLTY");
    const auto ip = intermediate_precision(anova, 0.0);
    return estimator == "s_M" ? ip.s_M : ip.s_M * ip.s_M;
  }
  if (spec.instruments.size() < 2)
    raise_input("BadSpec", "estimator '" + estimator +
                               "' needs at least 2 instruments");
  const auto flat = spec.replicates > 1 ? aggregate_replicates(ds, "QLTY") : ds;
  const auto pairs = pair_by_object(flat, spec.instruments[0].id,
                                    spec.instruments[1].id, "QLTY");
  if (estimator == "d_bar") return bland_altman(pairs).d_bar;
  if (estimator == "s_d") return bland_altman(pairs).s_d;
  if (estimator == "pearson_r") return pearson(pairs).r;
  if (estimator == "rho") {
    const auto anova = twoway_anova(flat, "QLTY");
    return icc3_1(anova, static_cast<long>(pairs.pairs.size())).rho;
  }
  raise_input("BadSpec", "unknown estimator '" + estimator + "'");
}

MonteCarloSummary monte_carlo(const ProcessSpec& spec,
                              const std::string& estimator, int n_reps) {
  if (n_reps < 2) raise_input("BadSpec", "n_reps must be >= 2");
  static const char* kKnown[] = {"trueness", "repeatability", "s_M", "s_M2",
                                 "d_bar", "s_d", "rho", "pearson_r"};
  bool known = false;
  for (const char* name : kKnown) known = known || estimator == name;
  if (!known) raise_input("BadSpec", "unknown estimator '" + estimator + "'");
  std::vector<double> estimates;
  estimates.reserve(n_reps);
  for (int i = 0; i < n_reps; ++i) {
    ProcessSpec rep_spec = spec;
    rep_spec.seed = spec.seed + static_cast<std::uint64_t>(i);
    try {
      estimates.push_back(
          run_estimator(estimator, rep_spec, gen_dataset(rep_spec)));
    } catch (const Error& e) {
      raise_numeric("EstimatorFailure", "replicate " + std::to_string(i) +
                                            ": " + e.what());
    }
  }
  MonteCarloSummary s;
  s.estimator = estimator;
  s.n_reps = n_reps;
  s.mean = mean(estimates);
  s.sd = sample_sd(estimates);
  std::sort(estimates.begin(), estimates.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(estimates.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, estimates.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return estimates[lo] * (1.0 - frac) + estimates[hi] * frac;
  };
  s.min = estimates.front();
  s.q25 = quantile(0.25);
  s.median = quantile(0.5);
  s.q75 = quantile(0.75);
  s.max = estimates.back();
  return s;
}

double c4_factor(int n) {
  if (n < 2) raise_input("BadSpec", "c4 needs n >= 2");
  const double half = static_cast<double>(n) / 2.0;
  return std::sqrt(2.0 / (n - 1)) *
         std::exp(std::lgamma(half) - std::lgamma(half - 0.5));
}

double expected_ms_interaction(const ProcessSpec& spec) {
  validate(spec);
  if (spec.replicates != 1)
    raise_input("BadSpec", "oracle expects one replicate per cell");
  const std::size_t m = spec.instruments.size();
  if (m < 2) raise_input("BadSpec", "oracle needs >= 2 instruments");
  double bias_mean = 0.0;
  for (const auto& inst : spec.instruments) bias_mean += inst.bias;
  bias_mean /= static_cast<double>(m);
  double ss_bias = 0.0;
  for (const auto& inst : spec.instruments)
    ss_bias += (inst.bias - bias_mean) * (inst.bias - bias_mean);
  const double sigma_u2 = spec.sigma_interaction * spec.sigma_interaction +
                          spec.sigma_noise * spec.sigma_noise;
  return ss_bias / static_cast<double>(m - 1) + sigma_u2;
}

double expected_mean_difference(const ProcessSpec& spec) {
  if (spec.instruments.size() < 2)
    raise_input("BadSpec", "oracle needs >= 2 instruments");
  return spec.instruments[0].bias - spec.instruments[1].bias;
}

double expected_sd_difference(const ProcessSpec& spec) {
  validate(spec);
  if (spec.replicates != 1)
    raise_input("BadSpec", "oracle expects one replicate per cell");
  const double sigma_u2 = spec.sigma_interaction * spec.sigma_interaction +
                          spec.sigma_noise * spec.sigma_noise;
  return std::sqrt(2.0 * sigma_u2) * c4_factor(spec.n_objects);
}

double expected_icc(const ProcessSpec& spec, int n_reps, std::uint64_t seed) {
  validate(spec);
  if (spec.instruments.size() != 2 || spec.replicates != 1)
    raise_input("BadSpec",
                "icc oracle expects 2 instruments, one replicate per cell");
  const int n = spec.n_objects;
  const double sigma_u2 = spec.sigma_interaction * spec.sigma_interaction +
                          spec.sigma_noise * spec.sigma_noise;
  const double delta = expected_mean_difference(spec);
  const int df_e = n - 1;  // (n-1)(m-1), m = 2
  SplitMix64 rng(seed);
  double sum = 0.0;
  for (int rep = 0; rep < n_reps; ++rep) {
    // MS(Instrument): (n/2) D^2 with D ~ N(delta, 2 sigma_u^2 / n)
    const double d =
        delta + std::sqrt(2.0 * sigma_u2 / n) * rng.normal();
    const double ms_i = 0.5 * n * d * d;
    // MS(Residual): sigma_u^2 chi2(df)/df
    double chi2 = 0.0;
    for (int k = 0; k < df_e; ++k) {
      const double z = rng.normal();
      chi2 += z * z;
    }
    const double ms_e = sigma_u2 * chi2 / df_e;
    double s2m = (ms_i - ms_e) / n;
    if (s2m < 0.0) s2m = 0.0;
    const double denom = s2m + ms_e;
    sum += denom > 0.0 ? s2m / denom : 0.0;
  }
  return sum / static_cast<double>(n_reps);
}

}  // namespace accord
