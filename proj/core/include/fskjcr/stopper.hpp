#pragma once

#include <limits>
#include <span>
#include <vector>

#include "fskjcr/fsk.hpp"
#include "fskjcr/rng.hpp"

namespace fskjcr {

/// Running tone-usage counts of the waveform generated so far.
///
/// Keeps sum_m N_m^2 alongside the counts so that flatness and the
/// chi-squared statistic are O(1) per subpulse:
///   U(L)      = (M * sum_sq - L^2) / (L^2 M^2)
///   chi^2(L)  = (M * sum_sq - L^2) / L
class SpectrumState {
 public:
  explicit SpectrumState(int M);

  /// Appends one subpulse with tone `symbol`.
  void push(int symbol);

  int alphabet() const { return static_cast<int>(counts_.size()); }
  long length() const { return L_; }
  std::span<const long> counts() const { return counts_; }
  long long sum_sq() const { return sum_sq_; }

  /// M * sum_sq - L^2, the exact integer numerator shared by U and chi^2.
  long long imbalance() const;

 private:
  std::vector<long> counts_;
  long L_ = 0;
  long long sum_sq_ = 0;
};

/// Functional form of SpectrumState::push.
SpectrumState update(SpectrumState state, int symbol);

/// Mean squared deviation of the tone proportions from 1/M.
double flatness(const SpectrumState& state);

/// Pearson chi-squared statistic of the counts against L/M; equals L M^2 U(L).
double chi2_of(const SpectrumState& state);

/// Thresholds of the dynamic stopping rule.
struct StoppingConfig {
  static constexpr long kUnbounded = std::numeric_limits<long>::max();

  double gamma1 = 1.0;  ///< minimum L from the RMS-time requirement
  double gamma2 = 1e-4; ///< flatness threshold
  double gamma3 = 1.0;  ///< minimum L from the AF-variance requirement
  long gamma4 = kUnbounded;  ///< maximum L

  static StoppingConfig flatness_only(double gamma2, long gamma4 = kUnbounded);

  /// max(ceil(gamma1), ceil(gamma3)).
  long min_length() const;
  void validate() const;
};

struct StopDecision {
  bool stopped = false;
  long L = 0;
  bool forced = false;  ///< stopped at gamma4 with the flatness requirement unmet
};

StopDecision decide(const SpectrumState& state, const StoppingConfig& config);

struct DynamicWaveform {
  FrequencySequence sequence;
  StopDecision decision;
};

/// Draws i.i.d. uniform tones until `decide` reports a stop.
DynamicWaveform generate_waveform(Rng& rng, int M, const StoppingConfig& config);

/// sqrt(12 sigma_t^2 / T^2): the L at which L^2 T^2 / 12 reaches the requirement.
double gamma1_from_rms_requirement(double sigma_t_sq_req, double T);

/// (M-1)(M^2-M+1) / (M^4 sigma_A^2): the L at which the largest grid-point
/// sidelobe variance drops to the requirement.
double gamma3_from_af_variance(double sigma_A_sq_req, int M);

}  // namespace fskjcr
