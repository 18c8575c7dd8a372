#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "accord/core_data.hpp"

namespace accord {

struct InstrumentSpec {
  std::string id;
  double bias = 0.0;
};

// Synthetic measurement process: y = 50 + object + bias + interaction + noise,
// all random components gaussian.
struct ProcessSpec {
  int n_objects = 2;
  std::vector<InstrumentSpec> instruments;
  double sigma_object = 0.0;
  double sigma_interaction = 0.0;
  double sigma_noise = 0.0;
  int replicates = 1;
  std::uint64_t seed = 0;
};

ProcessSpec process_spec_from_json(const std::string& json_text);

// SplitMix64: cheap splittable generator; replicate i of a Monte Carlo run
// uses seed + i as its own stream.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform();  // in (0, 1)
  double normal();   // standard normal via inverse CDF
 private:
  std::uint64_t state_;
};

// Deterministic given spec.seed; variable tag is "QLTY".
MeasurementDataset gen_dataset(const ProcessSpec& spec);

// Replicate-mean aggregation: one record per (object, instrument) cell.
MeasurementDataset aggregate_replicates(const MeasurementDataset& ds,
                                        const std::string& variable);

struct MonteCarloSummary {
  std::string estimator;
  int n_reps = 0;
  double mean = 0.0;
  double sd = 0.0;
  double min = 0.0;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  double max = 0.0;
};

// Estimators: trueness, repeatability, s_M, s_M2, d_bar, s_d, rho, pearson_r.
// Throws EstimatorFailure with the replicate index on estimator errors.
double run_estimator(const std::string& estimator, const ProcessSpec& spec,
                     const MeasurementDataset& ds);

MonteCarloSummary monte_carlo(const ProcessSpec& spec,
                              const std::string& estimator, int n_reps);

// --- analytic / numeric oracle targets ------------------------------------

// Bias-correction factor: E[sample sd] = sigma * c4(n).
double c4_factor(int n);

// E[MS(Program:Instrument)] for one replicate per cell.
double expected_ms_interaction(const ProcessSpec& spec);

// E[d_bar] = bias_a - bias_b for the first two instruments.
double expected_mean_difference(const ProcessSpec& spec);

// E[s_d] including the c4 small-sample correction (one replicate per cell).
double expected_sd_difference(const ProcessSpec& spec);

// E[rho] from icc3_1, computed by direct simulation of the two independent
// mean squares (scalar sampling, no dataset or anova code involved).
// Valid for 2 instruments, one replicate per cell.
double expected_icc(const ProcessSpec& spec, int n_reps, std::uint64_t seed);

}  // namespace accord
