#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "accord/core_data.hpp"

namespace accord {

enum class CoverageMode { StudentT, Normal, Fixed2 };

CoverageMode coverage_mode_from_string(const std::string& s);
std::string to_string(CoverageMode m);

struct AccuracyReport {
  double s_r = 0.0;
  std::optional<double> trueness;
  double s_M = 0.0;
  double s_Rw = 0.0;
  double expanded = 0.0;
  double coverage_k = 0.0;
  double alpha = 0.05;
  CoverageMode mode = CoverageMode::Fixed2;
  AnovaTable anova;
  std::vector<std::string> warnings;
};

struct DeviationPoint {
  std::string object_id;
  double true_value = 0.0;
  double measured_value = 0.0;
};

struct DeviationReport {
  std::vector<DeviationPoint> points;
  double mean_deviation = 0.0;
  double epsilon = 0.5;
  long above = 0;  // measured > true + epsilon
  long below = 0;
  long on_diagonal = 0;
};

// Sample sd of repeated measurements; n = 1 yields 0 (deterministic
// instrument case).
double repeatability(const std::vector<double>& values);

// mean(values) - reference.
double trueness(const std::vector<double>& values, double reference);

// Nested decomposition Y = Object/Instrument + error. Requires every object
// measured by every instrument (balanced); rows: Program, Program:Instrument,
// Residual. F/p reported against the residual when its df > 0.
// Throws UnbalancedDesign, TooFewLevels.
AnovaTable nested_anova(const MeasurementDataset& ds,
                        const std::string& variable);

struct IntermediatePrecision {
  double s_M = 0.0;
  double s_Rw = 0.0;
};

// s_M = sqrt(MS(Program:Instrument)), s_Rw = sqrt(s_M^2 + s_r^2).
// Throws MissingTerm, ZeroDf.
IntermediatePrecision intermediate_precision(const AnovaTable& anova,
                                             double s_r);

struct ExpandedUncertainty {
  double k = 0.0;
  double expanded = 0.0;
};

// mode t: k = t_{1-alpha/2, n-2}; normal: k = z_{1-alpha/2}; fixed2: k = 2.
ExpandedUncertainty expanded_uncertainty(double s, int n, double alpha,
                                         CoverageMode mode);

// Full pipeline: nested anova on (instrument-paired) data, intermediate
// precision, expanded uncertainty. Flags a residual-df > 0 design in
// warnings, since s_M^2 is taken as MS(Program:Instrument) directly.
AccuracyReport accuracy_analysis(const MeasurementDataset& ds,
                                 const std::string& variable, double s_r,
                                 double alpha, CoverageMode mode,
                                 std::optional<double> reference = {});

// Throws MissingTruth when a measured object has no truth value.
DeviationReport deviations_from_reference(
    const std::vector<std::pair<std::string, double>>& measured,
    const std::map<std::string, double>& truth, double epsilon = 0.5);

}  // namespace accord
