#pragma once

#include <span>
#include <vector>

#include "fskjcr/fsk.hpp"
#include "fskjcr/stats.hpp"

namespace fskjcr {

/// Delay-Doppler grid point (tau, omega) = (k T, 2 pi r delta_f).
struct GridPoint {
  int k = 0;
  int r = 0;
  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

/// k in [0, L), |r| <= M-1, origin excluded.
bool in_domain(GridPoint p, long L, int M);

/// Number of points in the grid domain: L (2M - 1) - 1.
long domain_size(long L, int M);

/// Count of l in [k, L) with m_{l-k} - m_l = r.
long af_count(const FrequencySequence& seq, GridPoint p);

/// Grid-point sidelobe level af_count / L.
double af_sidelobe(const FrequencySequence& seq, GridPoint p);

struct SidelobeStats {
  double mean = 0.0;
  double variance = 0.0;
};

/// Scaled-binomial moments of the grid-point sidelobe:
///   mean     = (L-k)/L   * (M-|r|)/M^2
///   variance = (L-k)/L^2 * (M-|r|)(M^2-M+|r|)/M^4
SidelobeStats af_stats(long L, int M, GridPoint p);

struct VarianceScan {
  GridPoint argmax;
  double max_variance = 0.0;
  long points_scanned = 0;  ///< |D| as enumerated
  long quoted_count = 0;    ///< 2LM + L + M, the cardinality quoted in the literature
};

/// Exhaustive scan of af_stats variance over the grid domain.
VarianceScan af_variance_argmax(long L, int M);

/// Histogram of af_sidelobe(seq, p) over realizations.
Histogram empirical_pmf(std::span<const FrequencySequence> realizations, GridPoint p,
                        double lo, double hi, int bins);

/// |sum_n conj(s[n]) s[n - d] exp(-j omega t_n)| / sum_n |s[n]|^2 on a
/// delay x Doppler grid. Delays are rounded to whole samples. Row-major,
/// delays outer.
struct AmbiguitySurface {
  std::vector<double> delays;
  std::vector<double> dopplers;
  std::vector<double> values;

  double at(std::size_t i_delay, std::size_t i_doppler) const {
    return values[i_delay * dopplers.size() + i_doppler];
  }
};

AmbiguitySurface cross_ambiguity(const SampledWaveform& w, std::span<const double> delays,
                                 std::span<const double> dopplers);

}  // namespace fskjcr
