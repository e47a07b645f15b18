#include "fskjcr/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fskjcr/error.hpp"

namespace fskjcr {

void RunningStats::push(double x) {
  if (n_ == 0) {
    min_ = max_ = x;
  } else {
    min_ = std::min(min_, x);
    max_ = std::max(max_, x);
  }
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void RunningStats::merge(const RunningStats& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double delta = other.mean_ - mean_;
  const double n = na + nb;
  mean_ += delta * nb / n;
  m2_ += other.m2_ + delta * delta * na * nb / n;
  n_ += other.n_;
  min_ = std::min(min_, other.min_);
  max_ = std::max(max_, other.max_);
}

double RunningStats::variance() const {
  return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
  if (sorted_.empty()) return 0.0;
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalCdf::below(double x) const {
  if (sorted_.empty()) return 0.0;
  const auto it = std::lower_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalCdf::quantile(double p) const {
  if (sorted_.empty()) throw ParameterError("quantile of empty sample");
  if (!(p > 0.0 && p <= 1.0)) throw ParameterError("quantile level must lie in (0, 1]");
  const double n = static_cast<double>(sorted_.size());
  auto idx = static_cast<std::size_t>(std::ceil(p * n - 1e-9));
  idx = std::clamp<std::size_t>(idx, 1, sorted_.size());
  return sorted_[idx - 1];
}

double EmpiricalCdf::mean() const {
  if (sorted_.empty()) return 0.0;
  return std::accumulate(sorted_.begin(), sorted_.end(), 0.0) / static_cast<double>(sorted_.size());
}

Histogram make_histogram(std::span<const double> values, double lo, double hi, int bins) {
  if (values.empty()) throw ParameterError("histogram of empty input");
  if (bins < 1 || !(hi > lo)) throw ParameterError("histogram needs bins >= 1 and hi > lo");

  Histogram h;
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i) h.edges[i] = lo + (hi - lo) * i / bins;
  h.mass.assign(static_cast<std::size_t>(bins), 0.0);

  RunningStats st;
  std::size_t in_range = 0;
  for (double v : values) {
    st.push(v);
    if (v < lo || v > hi) {
      ++h.out_of_range;
      continue;
    }
    auto b = static_cast<int>((v - lo) / (hi - lo) * bins);
    b = std::min(b, bins - 1);
    h.mass[static_cast<std::size_t>(b)] += 1.0;
    ++in_range;
  }
  if (in_range > 0) {
    for (double& m : h.mass) m /= static_cast<double>(in_range);
  }
  h.samples = values.size();
  h.sample_mean = st.mean();
  h.sample_variance = st.variance();
  return h;
}

}  // namespace fskjcr
