#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fskjcr {

/// Welford accumulator. variance() is the unbiased sample variance.
class RunningStats {
 public:
  void push(double x);
  void merge(const RunningStats& other);

  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const;
  double min() const { return min_; }
  double max() const { return max_; }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double min_ = 0.0;
  double max_ = 0.0;
};

/// Right-continuous empirical CDF over a fixed sample.
class EmpiricalCdf {
 public:
  EmpiricalCdf() = default;
  explicit EmpiricalCdf(std::vector<double> samples);

  /// Fraction of samples <= x.
  double operator()(double x) const;
  /// Fraction of samples < x.
  double below(double x) const;
  /// Smallest sample x with F(x) >= p, p in (0, 1].
  double quantile(double p) const;

  std::size_t size() const { return sorted_.size(); }
  bool empty() const { return sorted_.empty(); }
  std::span<const double> sorted() const { return sorted_; }
  double mean() const;

 private:
  std::vector<double> sorted_;
};

struct Histogram {
  std::vector<double> edges;  // size bins + 1
  std::vector<double> mass;   // normalized, sums to 1 over in-range samples
  std::size_t samples = 0;
  std::size_t out_of_range = 0;
  double sample_mean = 0.0;
  double sample_variance = 0.0;
};

/// Fixed-width histogram on [lo, hi]; the top edge is inclusive.
Histogram make_histogram(std::span<const double> values, double lo, double hi, int bins);

}  // namespace fskjcr
