#include "accord/stats.hpp"

#include <cmath>
#include <limits>

#include "accord/error.hpp"

namespace accord {

double mean(const std::vector<double>& values) {
  if (values.empty()) raise_input("EmptyInput", "mean of empty list");
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double sample_sd(const std::vector<double>& values) {
  if (values.size() < 2)
    raise_input("TooFewValues", "sample sd needs at least 2 values");
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

CorrelationResult pearson(const PairedMeasurements& pm) {
  const auto& pairs = pm.pairs;
  const int n = static_cast<int>(pairs.size());
  if (n < 3) raise_input("TooFewPairs", "pearson needs at least 3 pairs");
  double ma = 0.0, mb = 0.0;
  for (const auto& p : pairs) {
    ma += p.value_a;
    mb += p.value_b;
  }
  ma /= n;
  mb /= n;
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (const auto& p : pairs) {
    const double da = p.value_a - ma;
    const double db = p.value_b - mb;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  if (saa == 0.0 || sbb == 0.0)
    raise_input("DegenerateVariance", "zero variance in one coordinate");
  CorrelationResult out;
  out.n = n;
  out.r = sab / std::sqrt(saa * sbb);
  if (out.r > 1.0) out.r = 1.0;
  if (out.r < -1.0) out.r = -1.0;
  const double denom = 1.0 - out.r * out.r;
  if (denom <= 0.0) {
    out.t_stat = std::numeric_limits<double>::infinity() * (out.r >= 0 ? 1 : -1);
    out.p_two_sided = 0.0;
    return out;
  }
  out.t_stat = out.r * std::sqrt((n - 2) / denom);
  const double tail = 1.0 - t_cdf(std::fabs(out.t_stat), n - 2);
  out.p_two_sided = std::min(1.0, 2.0 * tail);
  return out;
}

namespace {

// Continued fraction for the incomplete beta (Lentz).
double betacf(double a, double b, double x) {
  const double tiny = 1e-300;
  const double eps = 1e-15;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 300; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0))
    raise_input("BadDegreesOfFreedom", "beta parameters must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) -
                          std::lgamma(b) + a * std::log(x) +
                          b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0))
    raise_input("BadProbability", "probability must lie in (0,1)");
  // Acklam's rational approximation, then one Halley refinement.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = normal_cdf(x) - p;
  const double u =
      e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
  x = x - u / (1.0 + x * u / 2.0);
  return x;
}

double t_cdf(double t, double df) {
  if (!(df > 0.0)) raise_input("BadDegreesOfFreedom", "df must be positive");
  if (t == 0.0) return 0.5;
  const double x = df / (df + t * t);
  const double tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, x);
  return t > 0.0 ? 1.0 - tail : tail;
}

namespace {

double t_pdf(double t, double df) {
  const double ln = std::lgamma((df + 1.0) / 2.0) - std::lgamma(df / 2.0) -
                    0.5 * std::log(df * M_PI) -
                    (df + 1.0) / 2.0 * std::log1p(t * t / df);
  return std::exp(ln);
}

}  // namespace

double t_quantile(double prob, double df) {
  if (!(prob > 0.0) || !(prob < 1.0))
    raise_input("BadProbability", "probability must lie in (0,1)");
  if (!(df > 0.0)) raise_input("BadDegreesOfFreedom", "df must be positive");
  if (prob == 0.5) return 0.0;
  if (prob < 0.5) return -t_quantile(1.0 - prob, df);
  if (df == 1.0) return std::tan(M_PI * (prob - 0.5));
  if (df == 2.0) {
    const double q = 2.0 * prob - 1.0;
    return q * std::sqrt(2.0 / (1.0 - q * q));
  }
  // Bracket from the normal start, then safeguarded Newton.
  double lo = 0.0;
  double hi = std::max(1.0, 2.0 * normal_quantile(prob));
  while (t_cdf(hi, df) < prob) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) break;
  }
  double x = std::min(hi, std::max(lo, normal_quantile(prob)));
  for (int i = 0; i < 200; ++i) {
    const double err = t_cdf(x, df) - prob;
    if (err > 0.0)
      hi = x;
    else
      lo = x;
    const double deriv = t_pdf(x, df);
    double next = (deriv > 0.0) ? x - err / deriv : 0.5 * (lo + hi);
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - x) <= 1e-14 * std::max(1.0, std::fabs(x))) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

double f_pvalue(double f, int df1, int df2) {
  if (df1 < 1 || df2 < 1)
    raise_input("BadDegreesOfFreedom", "F dfs must be >= 1");
  if (f <= 0.0) return 1.0;
  const double x = df2 / (df2 + static_cast<double>(df1) * f);
  return regularized_incomplete_beta(df2 / 2.0, df1 / 2.0, x);
}

}  // namespace accord
