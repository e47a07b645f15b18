#include "fskjcr/ambiguity.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "fskjcr/error.hpp"

namespace fskjcr {

bool in_domain(GridPoint p, long L, int M) {
  if (p.k < 0 || p.k >= L) return false;
  if (std::abs(p.r) > M - 1) return false;
  return !(p.k == 0 && p.r == 0);
}

long domain_size(long L, int M) { return L * (2 * static_cast<long>(M) - 1) - 1; }

namespace {

void require_domain(GridPoint p, long L, int M) {
  if (!in_domain(p, L, M)) {
    throw ParameterError("grid point (" + std::to_string(p.k) + ", " + std::to_string(p.r) +
                         ") outside the delay-Doppler domain");
  }
}

}  // namespace

long af_count(const FrequencySequence& seq, GridPoint p) {
  const long L = static_cast<long>(seq.size());
  require_domain(p, L, seq.alphabet());
  const auto m = seq.indices();
  long hits = 0;
  for (long l = p.k; l < L; ++l) {
    if (m[static_cast<std::size_t>(l - p.k)] - m[static_cast<std::size_t>(l)] == p.r) ++hits;
  }
  return hits;
}

double af_sidelobe(const FrequencySequence& seq, GridPoint p) {
  return static_cast<double>(af_count(seq, p)) / static_cast<double>(seq.size());
}

SidelobeStats af_stats(long L, int M, GridPoint p) {
  require_domain(p, L, M);
  const double l = static_cast<double>(L);
  const double m = M;
  const double k = p.k;
  const double ar = std::abs(p.r);
  SidelobeStats s;
  s.mean = (l - k) / l * (m - ar) / (m * m);
  s.variance = (l - k) / (l * l) * (m - ar) * (m * m - m + ar) / (m * m * m * m);
  return s;
}

VarianceScan af_variance_argmax(long L, int M) {
  if (L < 1) throw ParameterError("L must be >= 1");
  if (M < 2) throw ParameterError("M must be >= 2");
  VarianceScan scan;
  scan.quoted_count = 2 * L * M + L + M;
  bool first = true;
  for (int k = 0; k < L; ++k) {
    // Doppler order 0, 1, -1, 2, -2, ... so that ties resolve to the smaller
    // |r| and then the positive index.
    for (int a = 0; a <= M - 1; ++a) {
      for (int r : {a, -a}) {
        if (a == 0 && r != 0) continue;
        const GridPoint p{k, r};
        if (!in_domain(p, L, M)) continue;
        ++scan.points_scanned;
        const double v = af_stats(L, M, p).variance;
        if (first || v > scan.max_variance) {
          scan.max_variance = v;
          scan.argmax = p;
          first = false;
        }
        if (a == 0) break;
      }
    }
  }
  return scan;
}

Histogram empirical_pmf(std::span<const FrequencySequence> realizations, GridPoint p, double lo,
                        double hi, int bins) {
  if (realizations.empty()) throw ParameterError("empirical_pmf needs at least one realization");
  std::vector<double> values;
  values.reserve(realizations.size());
  for (const auto& seq : realizations) values.push_back(af_sidelobe(seq, p));
  return make_histogram(values, lo, hi, bins);
}

AmbiguitySurface cross_ambiguity(const SampledWaveform& w, std::span<const double> delays,
                                 std::span<const double> dopplers) {
  if (delays.empty() || dopplers.empty()) throw ParameterError("cross_ambiguity needs nonempty grids");
  if (w.samples.empty()) throw ParameterError("cross_ambiguity needs a nonempty waveform");

  const auto& s = w.samples;
  const long n_total = static_cast<long>(s.size());
  double energy = 0.0;
  for (const auto& x : s) energy += std::norm(x);

  AmbiguitySurface out;
  out.delays.assign(delays.begin(), delays.end());
  out.dopplers.assign(dopplers.begin(), dopplers.end());
  out.values.assign(delays.size() * dopplers.size(), 0.0);

  for (std::size_t i = 0; i < delays.size(); ++i) {
    const long d = std::lround(delays[i] * w.sample_rate);
    const long n_lo = std::max(0L, d);
    const long n_hi = std::min(n_total, n_total + d);
    for (std::size_t j = 0; j < dopplers.size(); ++j) {
      const double wstep = -dopplers[j] / w.sample_rate;
      double re = 0.0;
      double im = 0.0;
      for (long n = n_lo; n < n_hi; ++n) {
        const std::complex<double> prod =
            std::conj(s[static_cast<std::size_t>(n)]) * s[static_cast<std::size_t>(n - d)];
        const double ph = wstep * static_cast<double>(n);
        const double c = std::cos(ph);
        const double sn = std::sin(ph);
        re += prod.real() * c - prod.imag() * sn;
        im += prod.real() * sn + prod.imag() * c;
      }
      out.values[i * dopplers.size() + j] = std::hypot(re, im) / energy;
    }
  }
  return out;
}

}  // namespace fskjcr
