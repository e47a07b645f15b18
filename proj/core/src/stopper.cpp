#include "fskjcr/stopper.hpp"

#include <cmath>
#include <string>

#include "fskjcr/error.hpp"

namespace fskjcr {

SpectrumState::SpectrumState(int M) {
  if (M < 2) throw ParameterError("alphabet size M must be >= 2");
  counts_.assign(static_cast<std::size_t>(M), 0);
}

void SpectrumState::push(int symbol) {
  if (symbol < 0 || symbol >= alphabet()) {
    throw ParameterError("symbol " + std::to_string(symbol) + " outside [0, " + std::to_string(alphabet()) + ")");
  }
  long& n = counts_[static_cast<std::size_t>(symbol)];
  sum_sq_ += 2LL * n + 1;
  ++n;
  ++L_;
}

long long SpectrumState::imbalance() const {
  return static_cast<long long>(alphabet()) * sum_sq_ - static_cast<long long>(L_) * L_;
}

SpectrumState update(SpectrumState state, int symbol) {
  state.push(symbol);
  return state;
}

double flatness(const SpectrumState& state) {
  if (state.length() == 0) throw ParameterError("flatness undefined for L = 0");
  const double L = static_cast<double>(state.length());
  const double M = static_cast<double>(state.alphabet());
  return static_cast<double>(state.imbalance()) / (L * L * M * M);
}

double chi2_of(const SpectrumState& state) {
  if (state.length() == 0) throw ParameterError("chi-squared undefined for L = 0");
  return static_cast<double>(state.imbalance()) / static_cast<double>(state.length());
}

StoppingConfig StoppingConfig::flatness_only(double gamma2, long gamma4) {
  StoppingConfig c;
  c.gamma2 = gamma2;
  c.gamma4 = gamma4;
  c.validate();
  return c;
}

long StoppingConfig::min_length() const {
  const double lo = std::max({1.0, gamma1, gamma3});
  // Guard against values like 300.0000000001 produced by the threshold formulas.
  const double r = std::round(lo);
  return std::abs(lo - r) < 1e-9 * std::max(1.0, r) ? static_cast<long>(r)
                                                   : static_cast<long>(std::ceil(lo));
}

void StoppingConfig::validate() const {
  if (!(gamma2 > 0.0)) throw ParameterError("gamma2 must be positive");
  if (!(gamma1 >= 0.0) || !(gamma3 >= 0.0) || !std::isfinite(gamma1) || !std::isfinite(gamma3)) {
    throw ParameterError("gamma1 and gamma3 must be finite and nonnegative");
  }
  if (gamma4 < 1 || gamma4 < min_length()) {
    throw ParameterError("gamma4 must be >= max(gamma1, gamma3, 1)");
  }
}

StopDecision decide(const SpectrumState& state, const StoppingConfig& config) {
  StopDecision d;
  d.L = state.length();
  if (d.L == 0) return d;
  if (d.L >= config.min_length() && flatness(state) <= config.gamma2) {
    d.stopped = true;
    return d;
  }
  if (d.L >= config.gamma4) {
    d.stopped = true;
    d.forced = true;
  }
  return d;
}

DynamicWaveform generate_waveform(Rng& rng, int M, const StoppingConfig& config) {
  config.validate();
  std::uniform_int_distribution<int> pick(0, M - 1);
  SpectrumState state(M);
  std::vector<int> symbols;
  for (;;) {
    const int m = pick(rng);
    state.push(m);
    symbols.push_back(m);
    const StopDecision d = decide(state, config);
    if (d.stopped) return {FrequencySequence(std::move(symbols), M), d};
  }
}

double gamma1_from_rms_requirement(double sigma_t_sq_req, double T) {
  if (!(sigma_t_sq_req > 0.0) || !(T > 0.0)) {
    throw ParameterError("RMS-time requirement and T must be positive");
  }
  return std::sqrt(12.0 * sigma_t_sq_req / (T * T));
}

double gamma3_from_af_variance(double sigma_A_sq_req, int M) {
  if (!(sigma_A_sq_req > 0.0)) throw ParameterError("AF variance requirement must be positive");
  if (M < 2) throw ParameterError("alphabet size M must be >= 2");
  const double m = M;
  return (m - 1.0) * (m * m - m + 1.0) / (m * m * m * m * sigma_A_sq_req);
}

}  // namespace fskjcr
