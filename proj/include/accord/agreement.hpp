#pragma once

#include <string>
#include <vector>

#include "accord/core_data.hpp"

namespace accord {

struct BlandAltmanPoint {
  std::string object_id;
  double pair_mean = 0.0;
  double difference = 0.0;
};

struct BlandAltmanReport {
  std::string instrument_a;
  std::string instrument_b;
  double d_bar = 0.0;
  double s_d = 0.0;
  double k = 2.0;
  double lower_limit = 0.0;
  double upper_limit = 0.0;
  std::vector<BlandAltmanPoint> points;
  long outside_count = 0;
};

struct IccReport {
  AnovaTable anova;
  double s2_M = 0.0;
  double s2_e = 0.0;
  double rho = 0.0;
  bool clamped = false;  // negative s2_M estimate clamped to 0
  bool good_agreement = false;  // rho >= 0.75
};

// Differences are instrument_a - instrument_b. Throws TooFewPairs.
BlandAltmanReport bland_altman(const PairedMeasurements& pairs, double k = 2.0);

// Additive two-way decomposition y = Instrument + Program + error, one
// observation per cell. Rows: Instrument, Program, Residual with F and p
// against the residual. Throws IncompleteGrid.
AnovaTable twoway_anova(const MeasurementDataset& ds,
                        const std::string& variable);

// s2_M = (MS(Instrument) - MS(Residual)) / n_obj, s2_e = MS(Residual),
// rho = s2_M / (s2_M + s2_e). Throws MissingTerm.
IccReport icc3_1(const AnovaTable& anova, long n_obj);

}  // namespace accord
