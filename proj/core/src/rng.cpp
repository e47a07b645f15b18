#include "fskjcr/rng.hpp"

#include <cmath>

namespace fskjcr {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng make_stream(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream) {
  const std::uint64_t key = splitmix64(seed ^ splitmix64(stream ^ splitmix64(substream + 0x51ed2701ULL)));
  std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(substream)};
  return Rng(seq);
}

std::complex<double> complex_gaussian(Rng& rng, double variance) {
  if (variance <= 0.0) return {0.0, 0.0};
  std::normal_distribution<double> n(0.0, std::sqrt(0.5 * variance));
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

}  // namespace fskjcr
