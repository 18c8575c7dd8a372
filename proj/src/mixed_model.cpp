#include "accord/mixed_model.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <map>

#include "accord/error.hpp"
#include "accord/stats.hpp"

namespace accord {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

constexpr int kP = 4;  // Intercept, TreatmentTDD, TaskMR, GroupMR->BSK

using Vec4 = std::array<double, kP>;
using Mat4 = std::array<std::array<double, kP>, kP>;

// Cholesky factorization A = L L^T. Returns false when A is not positive
// definite (rank-deficient design).
bool cholesky(const Mat4& a, Mat4& l) {
  for (auto& row : l) row.fill(0.0);
  for (int i = 0; i < kP; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = a[i][j];
      for (int k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
      if (i == j) {
        if (s <= 1e-10 * std::max(1.0, std::fabs(a[i][i]))) return false;
        l[i][i] = std::sqrt(s);
      } else {
        l[i][j] = s / l[j][j];
      }
    }
  }
  return true;
}

Vec4 chol_solve(const Mat4& l, const Vec4& b) {
  Vec4 y{}, x{};
  for (int i = 0; i < kP; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= l[i][k] * y[k];
    y[i] = s / l[i][i];
  }
  for (int i = kP - 1; i >= 0; --i) {
    double s = y[i];
    for (int k = i + 1; k < kP; ++k) s -= l[k][i] * x[k];
    x[i] = s / l[i][i];
  }
  return x;
}

Mat4 chol_inverse(const Mat4& l) {
  Mat4 inv;
  for (int col = 0; col < kP; ++col) {
    Vec4 e{};
    e[col] = 1.0;
    const Vec4 x = chol_solve(l, e);
    for (int row = 0; row < kP; ++row) inv[row][col] = x[row];
  }
  return inv;
}

double chol_logdet(const Mat4& l) {
  double s = 0.0;
  for (int i = 0; i < kP; ++i) s += 2.0 * std::log(l[i][i]);
  return s;
}

struct Design {
  std::vector<Vec4> x;                       // n rows
  std::vector<double> y;                     // n values
  std::vector<std::vector<int>> subject_rows;  // per-subject row indices
  int n = 0;
};

struct ProfileFit {
  double criterion = 0.0;  // -2 restricted log-likelihood
  double sigma2 = 0.0;
  Vec4 beta{};
  Mat4 xtvx_inv{};
};

// GLS under V = I + lambda Z Z^T, exploiting the block structure:
// V^-1 = I - (lambda / (1 + m lambda)) J within each subject block.
ProfileFit profile(const Design& d, double lambda) {
  Mat4 a{};
  Vec4 b{};
  for (auto& row : a) row.fill(0.0);
  b.fill(0.0);
  double ytvy = 0.0;
  double logdet_v = 0.0;
  for (const auto& rows : d.subject_rows) {
    const double m = static_cast<double>(rows.size());
    const double c = lambda / (1.0 + m * lambda);
    logdet_v += std::log(1.0 + m * lambda);
    Vec4 xsum{};
    double ysum = 0.0;
    for (int idx : rows) {
      const Vec4& xi = d.x[idx];
      const double yi = d.y[idx];
      for (int i = 0; i < kP; ++i) {
        for (int j = 0; j <= i; ++j) a[i][j] += xi[i] * xi[j];
        b[i] += xi[i] * yi;
        xsum[i] += xi[i];
      }
      ytvy += yi * yi;
      ysum += yi;
    }
    for (int i = 0; i < kP; ++i) {
      for (int j = 0; j <= i; ++j) a[i][j] -= c * xsum[i] * xsum[j];
      b[i] -= c * xsum[i] * ysum;
    }
    ytvy -= c * ysum * ysum;
  }
  for (int i = 0; i < kP; ++i)
    for (int j = i + 1; j < kP; ++j) a[i][j] = a[j][i];

  Mat4 l;
  if (!cholesky(a, l))
    raise_numeric("RankDeficientDesign",
                  "X'V^-1X is singular; a factor has no variation");
  ProfileFit out;
  out.beta = chol_solve(l, b);
  double btb = 0.0;
  for (int i = 0; i < kP; ++i) btb += b[i] * out.beta[i];
  const double rss = std::max(ytvy - btb, 1e-300);
  const double dof = static_cast<double>(d.n - kP);
  out.sigma2 = rss / dof;
  out.criterion = dof * std::log(2.0 * M_PI * out.sigma2) + dof + logdet_v +
                  chol_logdet(l);
  out.xtvx_inv = chol_inverse(l);
  return out;
}

bool is_group_mr_bsk(const std::string& g) {
  return g == "MR->BSK" || g == "MR\xE2\x86\x92""BSK";
}

}  // namespace

std::vector<ExperimentRow> parse_experiment_csv(const std::string& text,
                                                const std::string& variable) {
  std::vector<std::string> lines;
  {
    std::string cur;
    for (char ch : text) {
      if (ch == '\n') {
        if (!cur.empty() && cur.back() == '\r') cur.pop_back();
        lines.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(ch);
      }
    }
    if (!cur.empty() && cur.back() == '\r') cur.pop_back();
    if (!cur.empty()) lines.push_back(cur);
  }
  if (lines.empty() ||
      lines[0] != "subject_id,group,treatment,task,variable,value")
    raise_input("BadHeader",
                "expected header "
                "'subject_id,group,treatment,task,variable,value'");
  std::vector<ExperimentRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = split_line(lines[i]);
    if (f.size() != 6)
      raise_input("BadRow", "line " + std::to_string(i + 1) +
                                ": expected 6 fields");
    if (f[5].empty())
      raise_input("BadRow", "line " + std::to_string(i + 1) + ": empty value");
    ExperimentRow r;
    r.subject_id = f[0];
    r.group = f[1];
    r.treatment = f[2];
    r.task = f[3];
    if (r.treatment != "ITLD" && r.treatment != "TDD")
      raise_input("BadRow", "line " + std::to_string(i + 1) +
                                ": treatment must be ITLD or TDD");
    if (r.task != "MR" && r.task != "BSK")
      raise_input("BadRow",
                  "line " + std::to_string(i + 1) + ": task must be MR or BSK");
    if (!is_group_mr_bsk(r.group) && r.group != "BSK->MR" &&
        r.group != "BSK\xE2\x86\x92""MR")
      raise_input("BadRow", "line " + std::to_string(i + 1) +
                                ": group must be MR->BSK or BSK->MR");
    if (f[4] != variable) continue;
    try {
      std::size_t pos = 0;
      r.y = std::stod(f[5], &pos);
      if (pos != f[5].size() || !std::isfinite(r.y)) throw std::exception();
    } catch (const std::exception&) {
      raise_input("BadRow", "line " + std::to_string(i + 1) + ": bad value '" +
                                f[5] + "'");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

namespace {

Design build_design(const std::vector<ExperimentRow>& rows, int* n_subjects) {
  Design d;
  std::map<std::string, int> subject_index;
  for (const auto& r : rows) {
    Vec4 x{1.0, r.treatment == "TDD" ? 1.0 : 0.0, r.task == "MR" ? 1.0 : 0.0,
           is_group_mr_bsk(r.group) ? 1.0 : 0.0};
    d.x.push_back(x);
    d.y.push_back(r.y);
    auto [it, inserted] =
        subject_index.emplace(r.subject_id, static_cast<int>(subject_index.size()));
    if (inserted) d.subject_rows.emplace_back();
    d.subject_rows[it->second].push_back(d.n);
    d.n += 1;
  }
  if (subject_index.size() < 2)
    raise_input("TooFewLevels", "need at least 2 subjects");
  if (d.n <= kP)
    raise_input("TooFewLevels", "need more observations than fixed effects");
  *n_subjects = static_cast<int>(subject_index.size());
  return d;
}

}  // namespace

double reml_criterion_at(const std::vector<ExperimentRow>& rows,
                         double lambda) {
  int n_subjects = 0;
  return profile(build_design(rows, &n_subjects), lambda).criterion;
}

MixedModelFit reml_fit(const std::vector<ExperimentRow>& rows) {
  int n_subjects = 0;
  Design d = build_design(rows, &n_subjects);

  // Golden-section on log lambda, then compare against the lambda = 0
  // boundary.
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = -12.0, hi = 12.0;
  double u1 = hi - phi * (hi - lo);
  double u2 = lo + phi * (hi - lo);
  double f1 = profile(d, std::exp(u1)).criterion;
  double f2 = profile(d, std::exp(u2)).criterion;
  int iters = 0;
  while (hi - lo > 1e-10) {
    if (++iters > 200)
      raise_numeric("NonConvergence",
                    "REML search did not converge in 200 iterations");
    if (f1 < f2) {
      hi = u2;
      u2 = u1;
      f2 = f1;
      u1 = hi - phi * (hi - lo);
      f1 = profile(d, std::exp(u1)).criterion;
    } else {
      lo = u1;
      u1 = u2;
      f1 = f2;
      u2 = lo + phi * (hi - lo);
      f2 = profile(d, std::exp(u2)).criterion;
    }
  }
  double lambda = std::exp(0.5 * (lo + hi));
  ProfileFit best = profile(d, lambda);
  const ProfileFit at_zero = profile(d, 0.0);
  if (at_zero.criterion <= best.criterion) {
    lambda = 0.0;
    best = at_zero;
  }

  MixedModelFit fit;
  fit.lambda = lambda;
  fit.var_residual = best.sigma2;
  fit.var_subject = lambda * best.sigma2;
  fit.reml_criterion = best.criterion;
  fit.aic = best.criterion + 2.0 * (kP + 2);
  fit.n_obs = d.n;
  fit.n_subjects = n_subjects;
  static const char* kTerms[kP] = {"Intercept", "TreatmentTDD", "TaskMR",
                                   "GroupMR->BSK"};
  for (int i = 0; i < kP; ++i)
    fit.coefficients.push_back(
        {kTerms[i], best.beta[i],
         std::sqrt(best.sigma2 * best.xtvx_inv[i][i])});
  return fit;
}

std::vector<CoefficientSummary> summarize_fit(const MixedModelFit& fit) {
  std::vector<CoefficientSummary> out;
  for (const auto& c : fit.coefficients) {
    CoefficientSummary s;
    s.term = c.term;
    s.estimate = c.estimate;
    s.std_error = c.std_error;
    s.z = (c.std_error > 0.0)
              ? c.estimate / c.std_error
              : (c.estimate == 0.0 ? 0.0
                                   : std::numeric_limits<double>::infinity());
    s.p = std::min(1.0, 2.0 * (1.0 - normal_cdf(std::fabs(s.z))));
    if (s.p < 0.001)
      s.stars = "***";
    else if (s.p < 0.01)
      s.stars = "**";
    else if (s.p < 0.05)
      s.stars = "*";
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace accord
