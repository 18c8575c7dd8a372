#include <doctest.h>

#include <cmath>
#include <random>

#include "accord/error.hpp"
#include "accord/stats.hpp"

using namespace accord;

namespace {

// Independent CDF oracle: adaptive Simpson quadrature of the t density.
double t_density(double x, double df) {
  return std::exp(std::lgamma((df + 1.0) / 2.0) - std::lgamma(df / 2.0) -
                  0.5 * std::log(df * M_PI) -
                  (df + 1.0) / 2.0 * std::log1p(x * x / df));
}

double simpson(double a, double b, double fa, double fm, double fb, double df,
               double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = t_density(lm, df), frm = t_density(rm, df);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth > 40 || std::fabs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson(a, m, fa, flm, fm, df, tol / 2.0, depth + 1) +
         simpson(m, b, fm, frm, fb, df, tol / 2.0, depth + 1);
}

double oracle_t_cdf(double t, double df) {
  if (t < 0.0) return 1.0 - oracle_t_cdf(-t, df);
  const double integral =
      simpson(0.0, t, t_density(0.0, df), t_density(t / 2.0, df),
              t_density(t, df), df, 1e-13, 0);
  return 0.5 + integral;
}

double oracle_t_quantile(double p, double df) {
  double lo = 0.0, hi = 1.0;
  while (oracle_t_cdf(hi, df) < p) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (oracle_t_cdf(mid, df) < p)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-12 * std::max(1.0, std::fabs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("sample_sd on basic inputs") {
  CHECK(sample_sd({5, 5, 5}) == 0.0);
  CHECK(sample_sd({1, 2, 3}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_WITH_AS(sample_sd({1.0}), doctest::Contains("TooFewValues"),
                       Error);
}

TEST_CASE("sample_sd is insensitive to location") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(0.0, 100.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> v(10);
    for (auto& x : v) x = dist(rng);
    const double base = sample_sd(v);
    const double c = dist(rng);
    for (auto& x : v) x += c;
    CHECK(sample_sd(v) == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("pearson on identity and mirrored pairs") {
  PairedMeasurements pm{"A", "B", {}};
  for (int i = 0; i < 10; ++i)
    pm.pairs.push_back({"P" + std::to_string(i), static_cast<double>(i),
                        static_cast<double>(i)});
  auto res = pearson(pm);
  CHECK(res.r == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.p_two_sided == doctest::Approx(0.0).epsilon(1e-10));

  for (auto& p : pm.pairs) p.value_b = -p.value_a;
  CHECK(pearson(pm).r == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("pearson rejects degenerate inputs") {
  PairedMeasurements few{"A", "B", {{"P1", 1, 2}, {"P2", 3, 4}}};
  CHECK_THROWS_WITH_AS(pearson(few), doctest::Contains("TooFewPairs"), Error);
  PairedMeasurements flat{"A", "B", {{"P1", 1, 2}, {"P2", 1, 4}, {"P3", 1, 6}}};
  CHECK_THROWS_WITH_AS(pearson(flat), doctest::Contains("DegenerateVariance"),
                       Error);
}

TEST_CASE("pearson r is invariant under positive affine transforms") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> dist(0.0, 50.0);
  PairedMeasurements pm{"A", "B", {}};
  for (int i = 0; i < 20; ++i)
    pm.pairs.push_back({"P" + std::to_string(i), dist(rng), dist(rng)});
  const double base = pearson(pm).r;
  for (auto& p : pm.pairs) p.value_a = 3.5 * p.value_a + 11.0;
  CHECK(pearson(pm).r == doctest::Approx(base).epsilon(1e-10));
  for (auto& p : pm.pairs) p.value_b = 0.25 * p.value_b - 4.0;
  CHECK(pearson(pm).r == doctest::Approx(base).epsilon(1e-10));
}

TEST_CASE("t_quantile basics") {
  CHECK(t_quantile(0.5, 7) == 0.0);
  CHECK(t_quantile(0.975, 1e6) == doctest::Approx(1.96).epsilon(3e-4));
  CHECK_THROWS_WITH_AS(t_quantile(1.5, 5), doctest::Contains("BadProbability"),
                       Error);
}

TEST_CASE("t_quantile is antisymmetric") {
  for (double df : {1.0, 3.0, 12.0, 120.0})
    for (double p : {0.6, 0.9, 0.975, 0.999})
      CHECK(t_quantile(p, df) ==
            doctest::Approx(-t_quantile(1.0 - p, df)).epsilon(1e-12));
}

TEST_CASE("t_quantile matches the bisection oracle at df 12") {
  const double got = t_quantile(0.975, 12);
  const double want = oracle_t_quantile(0.975, 12);
  CHECK(got == doctest::Approx(want).epsilon(1e-9));
}

TEST_CASE("f_pvalue boundaries and large-scale values") {
  CHECK(f_pvalue(0.0, 3, 10) == 1.0);
  CHECK(f_pvalue(96.79, 1, 73) < 0.001);
  CHECK(f_pvalue(3.38, 73, 73) < 0.001);
  CHECK_THROWS_WITH_AS(f_pvalue(1.0, 0, 5),
                       doctest::Contains("BadDegreesOfFreedom"), Error);
}

TEST_CASE("f_pvalue is monotone non-increasing in f") {
  double prev = 1.0;
  for (double f = 0.0; f <= 20.0; f += 0.5) {
    const double p = f_pvalue(f, 4, 17);
    CHECK(p <= prev + 1e-15);
    prev = p;
  }
}

TEST_CASE("incomplete beta symmetry identity") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> ab(0.5, 40.0);
  std::uniform_real_distribution<double> xs(0.01, 0.99);
  for (int trial = 0; trial < 100; ++trial) {
    const double a = ab(rng), b = ab(rng), x = xs(rng);
    const double lhs = regularized_incomplete_beta(a, b, x) +
                       regularized_incomplete_beta(b, a, 1.0 - x);
    CHECK(lhs == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("normal quantile inverts the normal cdf") {
  for (double p : {0.001, 0.05, 0.31, 0.5, 0.84, 0.975, 0.999})
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963985).epsilon(1e-8));
}
