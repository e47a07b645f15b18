#include "fskjcr/fsk.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "fskjcr/error.hpp"

namespace fskjcr {

WaveformParams WaveformParams::make(int M, double T, double delta_f, double f0,
                                    int samples_per_subpulse) {
  WaveformParams p{M, T, delta_f, f0, samples_per_subpulse};
  if (p.samples_per_subpulse == 0) {
    p.validate(false);
    p.samples_per_subpulse = p.default_samples_per_subpulse();
  }
  p.validate(true);
  return p;
}

int WaveformParams::separation_cycles() const {
  return static_cast<int>(std::lround(delta_f * T));
}

int WaveformParams::default_samples_per_subpulse() const {
  return 4 * M * separation_cycles();
}

void WaveformParams::validate(bool for_synthesis) const {
  if (M < 2) throw ParameterError("alphabet size M must be >= 2, got " + std::to_string(M));
  if (!(T > 0.0) || !std::isfinite(T)) throw ParameterError("subpulse interval T must be positive");
  const double cycles = delta_f * T;
  if (!std::isfinite(cycles) || std::abs(cycles - std::round(cycles)) > 1e-9 ||
      std::lround(cycles) == 0) {
    throw ParameterError("delta_f * T must be a nonzero integer for tone orthogonality");
  }
  if (for_synthesis) {
    if (samples_per_subpulse < 1) throw ParameterError("samples_per_subpulse must be >= 1");
    const long span = 2L * M * std::labs(std::lround(cycles));
    if (samples_per_subpulse < span) {
      throw ParameterError("samples_per_subpulse must be >= 2*M*delta_f*T (" + std::to_string(span) + ")");
    }
  }
}

FrequencySequence::FrequencySequence(std::vector<int> indices, int M)
    : indices_(std::move(indices)), M_(M) {
  if (M_ < 2) throw ParameterError("alphabet size M must be >= 2");
  for (int m : indices_) {
    if (m < 0 || m >= M_) {
      throw ParameterError("tone index " + std::to_string(m) + " outside [0, " + std::to_string(M_) + ")");
    }
  }
}

std::vector<long> FrequencySequence::counts() const {
  std::vector<long> n(static_cast<std::size_t>(M_), 0);
  for (int m : indices_) ++n[static_cast<std::size_t>(m)];
  return n;
}

FrequencySequence random_sequence(Rng& rng, int M, long L) {
  if (M < 2) throw ParameterError("alphabet size M must be >= 2");
  if (L < 1) throw ParameterError("sequence length L must be >= 1");
  std::uniform_int_distribution<int> pick(0, M - 1);
  std::vector<int> idx(static_cast<std::size_t>(L));
  for (auto& m : idx) m = pick(rng);
  return FrequencySequence(std::move(idx), M);
}

namespace {

int bits_per_symbol(int M) {
  if (M < 2 || !std::has_single_bit(static_cast<unsigned>(M))) {
    throw ParameterError("bit mapping needs M to be a power of two, got " + std::to_string(M));
  }
  return std::countr_zero(static_cast<unsigned>(M));
}

}  // namespace

FrequencySequence bits_to_sequence(std::span<const std::uint8_t> bits, int M) {
  const int k = bits_per_symbol(M);
  if (bits.size() % static_cast<std::size_t>(k) != 0) {
    throw ParameterError("bit count " + std::to_string(bits.size()) + " is not a multiple of log2(M)");
  }
  std::vector<int> idx;
  idx.reserve(bits.size() / static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < bits.size(); i += static_cast<std::size_t>(k)) {
    int m = 0;
    for (int b = 0; b < k; ++b) {
      const auto bit = bits[i + static_cast<std::size_t>(b)];
      if (bit > 1) throw ParameterError("bit values must be 0 or 1");
      m = (m << 1) | bit;
    }
    idx.push_back(m);
  }
  return FrequencySequence(std::move(idx), M);
}

std::vector<std::uint8_t> sequence_to_bits(const FrequencySequence& seq, int M) {
  const int k = bits_per_symbol(M);
  std::vector<std::uint8_t> bits;
  bits.reserve(seq.size() * static_cast<std::size_t>(k));
  for (int m : seq.indices()) {
    if (m >= M) throw ParameterError("tone index " + std::to_string(m) + " exceeds alphabet");
    for (int b = k - 1; b >= 0; --b) bits.push_back(static_cast<std::uint8_t>((m >> b) & 1));
  }
  return bits;
}

std::vector<std::complex<double>> tone(const WaveformParams& params, int m) {
  const int n = params.samples_per_subpulse;
  const double fs = params.sample_rate();
  const double w = 2.0 * std::numbers::pi * params.tone_frequency(m);
  std::vector<std::complex<double>> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = std::polar(1.0, w * i / fs);
  return out;
}

SampledWaveform synthesize(const WaveformParams& params, const FrequencySequence& seq) {
  params.validate(true);
  if (seq.alphabet() != params.M) throw ParameterError("sequence alphabet differs from params.M");

  // One table per tone; subpulses copy from it.
  std::vector<std::vector<std::complex<double>>> tones;
  tones.reserve(static_cast<std::size_t>(params.M));
  for (int m = 0; m < params.M; ++m) tones.push_back(tone(params, m));

  SampledWaveform w;
  w.sample_rate = params.sample_rate();
  w.samples_per_subpulse = params.samples_per_subpulse;
  w.subpulses = seq.size();
  w.samples.reserve(seq.size() * static_cast<std::size_t>(params.samples_per_subpulse));
  for (int m : seq.indices()) {
    const auto& t = tones[static_cast<std::size_t>(m)];
    w.samples.insert(w.samples.end(), t.begin(), t.end());
  }
  return w;
}

}  // namespace fskjcr
