#pragma once

#include <map>
#include <string>
#include <vector>

namespace accord {

struct ExperimentRow {
  std::string subject_id;
  std::string group;      // "MR->BSK" or "BSK->MR"
  std::string treatment;  // "ITLD" or "TDD"
  std::string task;       // "MR" or "BSK"
  double y = 0.0;
};

struct Coefficient {
  std::string term;
  double estimate = 0.0;
  double std_error = 0.0;
};

struct MixedModelFit {
  std::vector<Coefficient> coefficients;  // Intercept, TreatmentTDD, TaskMR,
                                          // GroupMR->BSK
  double var_subject = 0.0;
  double var_residual = 0.0;
  double lambda = 0.0;  // var_subject / var_residual
  double reml_criterion = 0.0;  // -2 * restricted log-likelihood
  double aic = 0.0;
  int n_obs = 0;
  int n_subjects = 0;
};

struct CoefficientSummary {
  std::string term;
  double estimate = 0.0;
  double std_error = 0.0;
  double z = 0.0;
  double p = 1.0;
  std::string stars;  // "***", "**", "*" or ""
};

// Header: subject_id,group,treatment,task,variable,value; keeps only rows
// matching `variable`. Throws BadHeader, BadRow.
std::vector<ExperimentRow> parse_experiment_csv(const std::string& text,
                                                const std::string& variable);

// REML fit of y ~ Treatment + Task + Group + (1 | Subject). Fixed effects by
// GLS under V = I + lambda Z Z^T; lambda found by golden-section search on
// log lambda in [-12, 12]. Reference levels: ITLD, BSK, group BSK->MR.
// Throws RankDeficientDesign, NonConvergence, TooFewLevels.
MixedModelFit reml_fit(const std::vector<ExperimentRow>& rows);

// -2 restricted log-likelihood profiled at a fixed variance ratio lambda.
double reml_criterion_at(const std::vector<ExperimentRow>& rows,
                         double lambda);

// Wald z tests with normal p-values; star bands at 0.001 / 0.01 / 0.05.
std::vector<CoefficientSummary> summarize_fit(const MixedModelFit& fit);

}  // namespace accord
