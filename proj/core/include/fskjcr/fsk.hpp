#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "fskjcr/rng.hpp"

namespace fskjcr {

/// M-ary FSK waveform parameters. Tones sit at f0 + m * delta_f, m in [0, M).
struct WaveformParams {
  int M = 2;
  double T = 1.0;        ///< subpulse repetition interval [s]
  double delta_f = 1.0;  ///< tone separation [Hz]
  double f0 = 0.0;       ///< starting frequency [Hz]
  int samples_per_subpulse = 0;  ///< 0 selects the default 4*M*delta_f*T

  /// Validated construction; fills the default oversampling.
  static WaveformParams make(int M, double T = 1.0, double delta_f = 1.0, double f0 = 0.0,
                             int samples_per_subpulse = 0);

  /// Integer i with delta_f * T = i.
  int separation_cycles() const;
  int default_samples_per_subpulse() const;
  double sample_rate() const { return samples_per_subpulse / T; }
  double tone_frequency(int m) const { return f0 + m * delta_f; }

  /// Throws ParameterError when an invariant fails. The Nyquist condition is
  /// only checked when `for_synthesis` is set.
  void validate(bool for_synthesis = true) const;
};

/// Sequence of tone indices m_l, each in [0, M).
class FrequencySequence {
 public:
  FrequencySequence(std::vector<int> indices, int M);

  int alphabet() const { return M_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  int operator[](std::size_t l) const { return indices_[l]; }
  std::span<const int> indices() const { return indices_; }

  /// N_m for every tone.
  std::vector<long> counts() const;

  friend bool operator==(const FrequencySequence&, const FrequencySequence&) = default;

 private:
  std::vector<int> indices_;
  int M_;
};

/// Complex baseband samples of a synthesized waveform.
struct SampledWaveform {
  std::vector<std::complex<double>> samples;
  double sample_rate = 0.0;
  int samples_per_subpulse = 0;
  std::size_t subpulses = 0;

  double duration() const { return static_cast<double>(samples.size()) / sample_rate; }
};

/// I.i.d. uniform tone indices.
FrequencySequence random_sequence(Rng& rng, int M, long L);

/// Big-endian log2(M)-bit groups to tone indices.
FrequencySequence bits_to_sequence(std::span<const std::uint8_t> bits, int M);
std::vector<std::uint8_t> sequence_to_bits(const FrequencySequence& seq, int M);

/// Rectangular-pulse FSK envelope with the phase reset at every subpulse start:
/// sample n of subpulse l is exp(j 2 pi (f0 + m_l delta_f) n / fs).
SampledWaveform synthesize(const WaveformParams& params, const FrequencySequence& seq);

/// One subpulse of tone m (phase starting at zero).
std::vector<std::complex<double>> tone(const WaveformParams& params, int m);

}  // namespace fskjcr
