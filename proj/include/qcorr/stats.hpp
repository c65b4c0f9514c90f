#pragma once

#include <cstdint>
#include <vector>

namespace qcorr {

/// Two-sided normal quantile for 95% intervals.
inline constexpr double kZ95 = 1.959963984540054;

struct Interval {
  double lo = 0;
  double hi = 0;
};

/// Wilson score interval for a binomial proportion. samples must be positive.
Interval wilson(long successes, long samples, double z = kZ95);

/// 0.975 quantile of Student's t with df degrees of freedom.
double student_t975(int df);

struct FitResult {
  double slope = 0;
  double intercept = 0;
  double stderr_slope = 0;  // from the residuals
  int points = 0;
  Interval ci;  // slope +- t975(points - 2) * stderr_slope
};

/// Ordinary least squares of log(p) on log(n). Needs at least three points,
/// all n > 0 and p > 0; throws UsageError otherwise.
FitResult fit_exponent(const std::vector<double>& n, const std::vector<double>& p);

/// Success counts of several indicators read off the same samples, with all
/// pairwise joint counts, so that functions of the proportions get a
/// covariance-aware delta-method interval. Merging is plain addition.
class JointCounts {
 public:
  explicit JointCounts(int events = 0);
  int events() const { return static_cast<int>(hits_.size()); }
  long samples() const { return samples_; }
  long unknown() const { return unknown_; }
  long hits(int i) const { return hits_[i]; }
  long joint(int i, int j) const;
  double p(int i) const;

  void add(const std::vector<bool>& outcome);
  void add_unknown() { ++unknown_; }
  void merge(const JointCounts& other);

  /// Point value and 95% interval of prod_i p_i^power_i, by the delta method
  /// on the log scale. Throws UsageError when a used proportion is zero.
  struct Value {
    double value = 0;
    Interval ci;
  };
  Value log_linear(const std::vector<double>& powers) const;

 private:
  long samples_ = 0;
  long unknown_ = 0;
  std::vector<long> hits_;
  std::vector<long> pairs_;  // row-major upper triangle including the diagonal
};

/// Product of independently estimated proportions raised to powers, with a
/// log-scale delta-method interval.
JointCounts::Value independent_log_linear(const std::vector<double>& p, const std::vector<long>& samples,
                                          const std::vector<double>& powers);

/// Mean of a per-sample real statistic with a normal 95% interval.
class MeanAccumulator {
 public:
  void add(double x);
  void merge(const MeanAccumulator& other);
  long samples() const { return n_; }
  double sum() const { return sum_; }
  double mean() const;
  Interval ci() const;

 private:
  long n_ = 0;
  double sum_ = 0;
  double sum_sq_ = 0;
};

}  // namespace qcorr
