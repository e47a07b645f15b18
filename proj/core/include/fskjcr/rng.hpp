#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace fskjcr {

using Rng = std::mt19937_64;

/// Independent generator for (seed, stream, substream). Streams with distinct
/// keys are decorrelated through a splitmix64 finalizer chain.
Rng make_stream(std::uint64_t seed, std::uint64_t stream = 0, std::uint64_t substream = 0);

std::uint64_t splitmix64(std::uint64_t x);

/// Circular complex Gaussian with E|z|^2 = variance.
std::complex<double> complex_gaussian(Rng& rng, double variance);

}  // namespace fskjcr
