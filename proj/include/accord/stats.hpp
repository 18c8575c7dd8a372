#pragma once

#include <vector>

#include "accord/core_data.hpp"

namespace accord {

struct CorrelationResult {
  double r = 0.0;
  int n = 0;
  double t_stat = 0.0;
  double p_two_sided = 1.0;
};

double mean(const std::vector<double>& values);

// Sample standard deviation, divisor n-1. Throws TooFewValues for n < 2.
double sample_sd(const std::vector<double>& values);

// Pearson r with two-sided p from the t transform, n-2 df.
// Throws TooFewPairs (n < 3), DegenerateVariance.
CorrelationResult pearson(const PairedMeasurements& pairs);

// Regularized incomplete beta I_x(a, b), Lentz continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

double normal_cdf(double x);
double normal_quantile(double p);  // throws BadProbability

double t_cdf(double t, double df);
// Inverse t CDF; throws BadProbability. Accurate to ~1e-10 relative.
double t_quantile(double prob, double df);

// Upper-tail probability P(F > f) for an F(df1, df2) statistic.
// Throws BadDegreesOfFreedom.
double f_pvalue(double f, int df1, int df2);

}  // namespace accord
