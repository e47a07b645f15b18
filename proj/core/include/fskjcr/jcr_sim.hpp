#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fskjcr/fsk.hpp"
#include "fskjcr/rng.hpp"
#include "fskjcr/stopper.hpp"

namespace fskjcr {

using cvec = std::vector<std::complex<double>>;

/// Point target seen through r(t) = b s(t - tau) e^{j omega t} + n(t).
struct ChannelScenario {
  double tau_true = 0.0;    ///< [s]
  double omega_true = 0.0;  ///< [rad/s]
  double sigma_b_sq = 1.0;  ///< variance of the complex reflection gain b
  double snr = 0.0;         ///< linear; sigma_b^2 * (energy of s) / N0. Infinite means noiseless.
  double window = 0.0;      ///< observation length [s]; 0 selects duration + tau
  std::optional<std::complex<double>> fixed_gain;  ///< overrides the random draw of b

  /// sigma_b^2 L T / snr; zero when snr is infinite.
  double n0(long L, double T) const;
  void validate() const;
};

double db_to_linear(double db);

/// Rectangular delay x Doppler search grid.
struct SearchGrid {
  double tau_min = 0.0;
  double tau_step = 0.0;
  int n_tau = 1;
  double omega_min = 0.0;
  double omega_step = 0.0;
  int n_omega = 1;

  /// Grid with 2*half+1 points per axis centred on (tau, omega).
  static SearchGrid centered(double tau, double omega, double tau_step, int tau_half,
                             double omega_step, int omega_half);

  /// Delay step T/8 over +-2T; Doppler step 2 pi / (8 L_max T) over +-1 bin.
  static SearchGrid standard(const WaveformParams& params, double tau, double omega, long L_max);

  double tau(int i) const { return tau_min + tau_step * i; }
  double omega(int j) const { return omega_min + omega_step * j; }
  std::size_t size() const { return static_cast<std::size_t>(n_tau) * static_cast<std::size_t>(n_omega); }
  /// Index of (i_tau, j_omega) with delays outer.
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n_omega + static_cast<std::size_t>(j); }
  void validate() const;
};

struct EstimationResult {
  double tau_hat = 0.0;
  double omega_hat = 0.0;
  double peak_metric = 0.0;  ///< |matched filter output|^2 at the estimate
  int i_tau = 0;
  int j_omega = 0;
};

/// Received samples over the observation window. The delayed copy is
/// linearly interpolated between samples and zero outside the support;
/// noise is circular Gaussian with variance N0 * fs per sample.
cvec apply_channel(const SampledWaveform& w, const ChannelScenario& scen, Rng& rng);

/// s(t_n - tau) sampled on n = 0..count-1 by linear interpolation, zero outside support.
cvec delayed_replica(const SampledWaveform& w, double tau, std::size_t count);

/// Grid maximizer of |sum_n r[n] conj(s(t_n - tau)) e^{-j omega t_n}|^2. Ties
/// go to the smallest delay, then the smallest Doppler.
EstimationResult ml_estimate(std::span<const std::complex<double>> received, const SampledWaveform& w,
                             const SearchGrid& grid);

/// Full matched-filter output |.|^2 on the grid, delays outer.
std::vector<double> matched_filter_surface(std::span<const std::complex<double>> received,
                                           const SampledWaveform& w, const SearchGrid& grid);

/// Noncoherent symbol decision argmax_m |sum_n r[n] conj(tone_m[n])| over one subpulse.
int detect_symbol(std::span<const std::complex<double>> subpulse, const WaveformParams& params);

/// Matched-filter outputs of one waveform on a grid, as a Gaussian vector.
///
/// For a target on grid point g0 and white noise of per-sample variance s2,
/// the grid outputs are y = b G[:, g0] + z with z ~ CN(0, s2 G), where
/// G(g1, g2) = sum_n v_g2[n] conj(v_g1[n]) and v_g[n] = s[n - d_g] e^{j w_g n / fs}
/// over an unbounded window. G is evaluated in closed form per tone segment
/// and factored once; each trial then costs one triangular product.
/// Grid delays must be whole samples.
class MatchedFilterModel {
 public:
  MatchedFilterModel(const WaveformParams& params, const FrequencySequence& seq, const SearchGrid& grid,
                     std::size_t truth_index);
  ~MatchedFilterModel();
  MatchedFilterModel(MatchedFilterModel&&) noexcept;
  MatchedFilterModel& operator=(MatchedFilterModel&&) noexcept;

  std::size_t size() const;
  std::size_t truth_index() const;
  const SearchGrid& grid() const;
  double sample_rate() const;
  /// Energy sum_n |s[n]|^2 in samples.
  double energy() const;

  std::complex<double> gram(std::size_t g1, std::size_t g2) const;
  /// Noise-free output G[g, truth].
  std::complex<double> signal(std::size_t g) const;

  /// Draws a unit-variance correlated noise vector (covariance G) into `out`.
  void draw_noise(Rng& rng, cvec& out) const;

  /// Argmax of |b S + sqrt(noise_var) z|^2 with the ml_estimate tie rule.
  EstimationResult estimate(std::complex<double> b, double noise_var, std::span<const std::complex<double>> z) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Waveform-length policy under test.
struct Scheme {
  enum class Kind { fixed, dynamic };
  Kind kind = Kind::fixed;
  long L = 300;            ///< fixed length
  StoppingConfig stop;     ///< dynamic stopping rule
  long accept_min = 1;     ///< dynamic realizations outside [accept_min, accept_max] are excluded
  long accept_max = StoppingConfig::kUnbounded;
  std::string name;

  static Scheme fixed(long L);
  static Scheme dynamic(double gamma2, long accept_min = 1, long accept_max = StoppingConfig::kUnbounded,
                        long cap = 100000);
  void validate() const;
};

struct Realization {
  FrequencySequence sequence;
  long attempts = 1;  ///< dynamic draws consumed, including excluded ones
};

/// Draws one waveform realization, redrawing dynamic ones until they fall
/// inside the acceptance range.
Realization draw_realization(Rng& rng, const Scheme& scheme, int M, long max_attempts = 100000);

/// Monte Carlo settings shared by the MSE experiments.
struct SimSetup {
  WaveformParams params = WaveformParams::make(32);
  double sigma_b_sq = 1.0;
  double tau_true = 2.0;    ///< [s]
  double omega_true = 0.0;  ///< [rad/s]
  long grid_L_max = 400;
  std::optional<std::complex<double>> fixed_gain;

  SearchGrid grid() const;
  void validate() const;
};

struct RealizationMse {
  long L = 0;
  double rms_bw_sq = 0.0;
  long trials = 0;
  std::vector<double> delay_mse;    ///< per SNR, in units of T^2
  std::vector<double> doppler_mse;  ///< per SNR, (omega error * T)^2
};

/// Per-SNR MSEs of one waveform over `trials` draws of (b, noise). The same
/// draws are reused across SNRs.
RealizationMse evaluate_realization(Rng& rng, const SimSetup& setup, const FrequencySequence& seq,
                                    std::span<const double> snr_db, long trials);

struct SchemeRun {
  Scheme scheme;
  std::vector<double> snr_db;
  std::vector<FrequencySequence> sequences;
  std::vector<RealizationMse> realizations;
  long excluded = 0;  ///< dynamic draws rejected by the acceptance range

  std::vector<double> mean_delay_mse() const;
  std::vector<double> mean_doppler_mse() const;
  std::vector<long> lengths() const;
  std::vector<double> delay_column(std::size_t snr_index) const;
  std::vector<double> doppler_column(std::size_t snr_index) const;
};

/// Monte Carlo over `realizations` waveforms of the scheme, each with `trials`
/// noise draws. Realization i uses stream (seed, stream, i).
SchemeRun run_scheme(const Scheme& scheme, const SimSetup& setup, std::span<const double> snr_db,
                     long realizations, long trials, std::uint64_t seed, std::uint64_t stream);

/// Best and worst cases of a run: for delay the realizations with the largest
/// and smallest RMS bandwidth, for Doppler the longest and shortest waveform.
/// Each is re-evaluated with trials * extra_factor fresh draws.
struct ExtremeCases {
  RealizationMse delay_best;
  RealizationMse delay_worst;
  RealizationMse doppler_best;
  RealizationMse doppler_worst;
  std::size_t delay_best_index = 0;
  std::size_t delay_worst_index = 0;
  std::size_t doppler_best_index = 0;
  std::size_t doppler_worst_index = 0;
};

ExtremeCases evaluate_extremes(const SchemeRun& run, const SimSetup& setup, long trials,
                               std::uint64_t seed, std::uint64_t stream);

}  // namespace fskjcr
