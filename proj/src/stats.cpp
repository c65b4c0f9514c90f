#include "qcorr/stats.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "qcorr/errors.hpp"

namespace qcorr {

Interval wilson(long successes, long samples, double z) {
  if (samples <= 0 || successes < 0 || successes > samples) throw UsageError("wilson: need 0 <= successes <= samples, samples > 0");
  const double n = static_cast<double>(samples);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z / (1 + z2 / n) * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
  Interval out{centre - half, centre + half};
  // Clamp rounding so the interval always contains p.
  if (successes == 0) out.lo = 0;
  if (successes == samples) out.hi = 1;
  out.lo = std::max(0.0, std::min(out.lo, p));
  out.hi = std::min(1.0, std::max(out.hi, p));
  return out;
}

double student_t975(int df) {
  static const double table[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
                                 2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
                                 2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
  if (df < 1) throw UsageError("student_t975: df must be positive");
  if (df <= 30) return table[df - 1];
  return kZ95 + 2.4 / df;  // within 1e-3 beyond the table
}

FitResult fit_exponent(const std::vector<double>& n, const std::vector<double>& p) {
  if (n.size() != p.size()) throw UsageError("fit_exponent: size mismatch");
  if (n.size() < 3) throw UsageError("fit_exponent: need at least three points");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(n[i] > 0) || !(p[i] > 0)) throw UsageError("fit_exponent: zero or negative estimate");
    x.push_back(std::log(n[i]));
    y.push_back(std::log(p[i]));
  }
  const double m = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw UsageError("fit_exponent: all n equal");
  FitResult f;
  f.points = static_cast<int>(x.size());
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    rss += r * r;
  }
  f.stderr_slope = std::sqrt(rss / (m - 2) / sxx);
  const double half = student_t975(f.points - 2) * f.stderr_slope;
  f.ci = {f.slope - half, f.slope + half};
  return f;
}

JointCounts::JointCounts(int events) : hits_(events, 0), pairs_(events * (events + 1) / 2, 0) {}

long JointCounts::joint(int i, int j) const {
  if (i > j) std::swap(i, j);
  const int m = events();
  return pairs_[i * m - i * (i - 1) / 2 + (j - i)];
}

double JointCounts::p(int i) const {
  return samples_ == 0 ? 0.0 : static_cast<double>(hits_[i]) / static_cast<double>(samples_);
}

void JointCounts::add(const std::vector<bool>& outcome) {
  const int m = events();
  if (static_cast<int>(outcome.size()) != m) throw UsageError("JointCounts: outcome size mismatch");
  ++samples_;
  std::size_t k = 0;
  for (int i = 0; i < m; ++i) {
    hits_[i] += outcome[i];
    for (int j = i; j < m; ++j, ++k) pairs_[k] += outcome[i] && outcome[j];
  }
}

void JointCounts::merge(const JointCounts& other) {
  if (other.events() != events()) throw UsageError("JointCounts: merging different shapes");
  samples_ += other.samples_;
  unknown_ += other.unknown_;
  for (std::size_t i = 0; i < hits_.size(); ++i) hits_[i] += other.hits_[i];
  for (std::size_t i = 0; i < pairs_.size(); ++i) pairs_[i] += other.pairs_[i];
}

JointCounts::Value JointCounts::log_linear(const std::vector<double>& powers) const {
  const int m = events();
  if (static_cast<int>(powers.size()) != m) throw UsageError("log_linear: size mismatch");
  const double n = static_cast<double>(samples_);
  double log_value = 0, var = 0;
  for (int i = 0; i < m; ++i) {
    if (powers[i] == 0) continue;
    if (hits_[i] == 0) throw UsageError("log_linear: zero estimate");
    log_value += powers[i] * std::log(p(i));
  }
  // Var(log p_i) terms: Cov(p_i, p_j) / (n p_i p_j).
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (powers[i] == 0 || powers[j] == 0) continue;
      const double pij = static_cast<double>(joint(i, j)) / n;
      const double cov = (pij - p(i) * p(j)) / n;
      var += powers[i] * powers[j] * cov / (p(i) * p(j));
    }
  }
  const double sd = std::sqrt(std::max(var, 0.0));
  Value v;
  v.value = std::exp(log_value);
  v.ci = {std::exp(log_value - kZ95 * sd), std::exp(log_value + kZ95 * sd)};
  return v;
}

JointCounts::Value independent_log_linear(const std::vector<double>& p, const std::vector<long>& samples,
                                          const std::vector<double>& powers) {
  if (p.size() != samples.size() || p.size() != powers.size()) throw UsageError("independent_log_linear: size mismatch");
  double log_value = 0, var = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (powers[i] == 0) continue;
    if (!(p[i] > 0) || samples[i] <= 0) throw UsageError("independent_log_linear: zero estimate");
    log_value += powers[i] * std::log(p[i]);
    var += powers[i] * powers[i] * (1 - p[i]) / (static_cast<double>(samples[i]) * p[i]);
  }
  const double sd = std::sqrt(var);
  JointCounts::Value v;
  v.value = std::exp(log_value);
  v.ci = {std::exp(log_value - kZ95 * sd), std::exp(log_value + kZ95 * sd)};
  return v;
}

void MeanAccumulator::add(double x) {
  ++n_;
  sum_ += x;
  sum_sq_ += x * x;
}

void MeanAccumulator::merge(const MeanAccumulator& other) {
  n_ += other.n_;
  sum_ += other.sum_;
  sum_sq_ += other.sum_sq_;
}

double MeanAccumulator::mean() const { return n_ == 0 ? 0.0 : sum_ / static_cast<double>(n_); }

Interval MeanAccumulator::ci() const {
  if (n_ < 2) return {mean(), mean()};
  const double n = static_cast<double>(n_);
  const double var = std::max(0.0, (sum_sq_ - sum_ * sum_ / n) / (n - 1));
  const double half = kZ95 * std::sqrt(var / n);
  return {mean() - half, mean() + half};
}

}  // namespace qcorr
