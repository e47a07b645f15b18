#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fskjcr/ambiguity.hpp"
#include "fskjcr/error.hpp"
#include "fskjcr/rng.hpp"

using namespace fskjcr;

namespace {

// All M^L sequences in lexicographic order.
std::vector<FrequencySequence> enumerate(int M, int L) {
  std::vector<FrequencySequence> out;
  std::vector<int> idx(static_cast<std::size_t>(L), 0);
  while (true) {
    out.emplace_back(idx, M);
    int pos = L - 1;
    while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == M) idx[static_cast<std::size_t>(pos--)] = 0;
    if (pos < 0) break;
  }
  return out;
}

// Mean and variance of the sidelobe counting the correlation between
// indicators that share a symbol (pairs l, l + k).
SidelobeStats exact_stats(long L, int M, GridPoint g) {
  const double Md = M;
  const int ar = std::abs(g.r);
  if (g.k == 0) return {g.r == 0 ? 1.0 : 0.0, 0.0};
  const double p = (M - ar) / (Md * Md);
  const double triple = std::max(0, M - 2 * ar) / (Md * Md * Md);
  const double cov = (g.r == 0 ? p * p : triple) - p * p;
  const double n = static_cast<double>(L - g.k);
  const double pairs = static_cast<double>(std::max(0L, L - 2L * g.k));
  return {n * p / L, (n * p * (1.0 - p) + 2.0 * pairs * cov) / (static_cast<double>(L) * L)};
}

}  // namespace

TEST_SUITE("ambiguity") {

TEST_CASE("domain membership and size") {
  CHECK_FALSE(in_domain({0, 0}, 4, 2));
  CHECK(in_domain({0, 1}, 4, 2));
  CHECK(in_domain({3, -1}, 4, 2));
  CHECK_FALSE(in_domain({4, 0}, 4, 2));
  CHECK_FALSE(in_domain({1, 2}, 4, 2));
  CHECK_FALSE(in_domain({-1, 0}, 4, 2));
  for (int M : {2, 3, 8, 32}) {
    for (long L : {1L, 2L, 7L, 300L}) {
      long n = 0;
      for (int k = -1; k <= L; ++k)
        for (int r = -M; r <= M; ++r) n += in_domain({k, r}, L, M);
      CHECK(n == domain_size(L, M));
      CHECK(af_variance_argmax(L, M).points_scanned == n);
    }
  }
}

TEST_CASE("quoted cardinality differs from the enumerated domain") {
  const auto s = af_variance_argmax(300, 32);
  CHECK(s.quoted_count == 2 * 300 * 32 + 300 + 32);
  CHECK(s.points_scanned == 300 * 63 - 1);
  CHECK(s.quoted_count != s.points_scanned);
}

TEST_CASE("sidelobe on hand-made sequences") {
  const FrequencySequence a({0, 1}, 2);
  CHECK(af_sidelobe(a, {1, 0}) == 0.0);
  CHECK(af_sidelobe(a, {1, -1}) == 0.5);  // m0 - m1 = -1
  CHECK(af_sidelobe(a, {1, 1}) == 0.0);
  const FrequencySequence b({1, 1}, 2);
  CHECK(af_sidelobe(b, {1, 0}) == 0.5);
  const FrequencySequence c({0, 1, 2, 0, 1, 2}, 3);
  CHECK(af_count(c, {3, 0}) == 3);
  CHECK(af_count(c, {1, -1}) == 4);
  CHECK(af_count(c, {1, 2}) == 1);
  CHECK_THROWS_AS(af_sidelobe(c, {6, 0}), ParameterError);
  CHECK_THROWS_AS(af_sidelobe(c, {0, 3}), ParameterError);
}

TEST_CASE("two-symbol enumeration") {
  const auto all = enumerate(2, 2);
  REQUIRE(all.size() == 4);
  std::vector<double> v;
  for (const auto& s : all) v.push_back(af_sidelobe(s, {1, 0}));
  CHECK(v == std::vector<double>{0.5, 0.0, 0.0, 0.5});
  const auto st = af_stats(2, 2, {1, 0});
  CHECK(st.mean == doctest::Approx(0.25));
  CHECK(st.variance == doctest::Approx(0.0625));
}

TEST_CASE("enumeration agrees with the exact moments on every grid point") {
  for (int M : {2, 3}) {
    const int Lmax = M == 2 ? 8 : 5;
    for (int L = 1; L <= Lmax; ++L) {
      const auto all = enumerate(M, L);
      for (int k = 0; k < L; ++k) {
        for (int r = -(M - 1); r <= M - 1; ++r) {
          const GridPoint g{k, r};
          if (!in_domain(g, L, M)) continue;
          long double s1 = 0, s2 = 0;
          for (const auto& q : all) {
            const long double x = af_sidelobe(q, g);
            s1 += x;
            s2 += x * x;
          }
          const long double n = static_cast<long double>(all.size());
          const double mean = static_cast<double>(s1 / n);
          const double var = static_cast<double>(s2 / n - (s1 / n) * (s1 / n));
          const auto ex = exact_stats(L, M, g);
          CHECK(std::abs(mean - ex.mean) < 1e-12);
          CHECK(std::abs(var - ex.variance) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("closed-form moments are exact off the zero-delay row when indicators are uncorrelated") {
  for (int M : {2, 3, 5, 32}) {
    for (long L : {2L, 5L, 8L, 300L}) {
      for (int k = 1; k < L; ++k) {
        for (int r = -(M - 1); r <= M - 1; ++r) {
          if (r != 0 && 2 * k < L) continue;
          const auto a = af_stats(L, M, {k, r});
          const auto e = exact_stats(L, M, {k, r});
          CHECK(a.mean == doctest::Approx(e.mean).epsilon(1e-12));
          CHECK(a.variance == doctest::Approx(e.variance).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("closed-form mean holds for every k >= 1") {
  for (long L : {3L, 8L, 64L})
    for (int k = 1; k < L; ++k)
      for (int r = -3; r <= 3; ++r)
        CHECK(af_stats(L, 4, {k, r}).mean == doctest::Approx(exact_stats(L, 4, {k, r}).mean));
}

TEST_CASE("variance argmax scan") {
  CHECK(af_variance_argmax(4, 2).argmax == GridPoint{0, 1});
  CHECK(af_variance_argmax(2, 2).argmax == GridPoint{0, 1});
  // (0, +-1) against (1, 0): the zero-delay row wins while M^2 >= L (M - 1).
  for (int M : {2, 4, 8, 32}) {
    for (long L : {1L, 2L, 4L, 16L, 33L, 34L, 150L, 300L, 1000L}) {
      const auto s = af_variance_argmax(L, M);
      const bool zero_row = static_cast<long>(M) * M >= L * (M - 1) || L == 1;
      CHECK(s.argmax == (zero_row ? GridPoint{0, 1} : GridPoint{1, 0}));
      // brute-force check of the maximum itself
      double best = 0.0;
      for (int k = 0; k < L; ++k)
        for (int r = -(M - 1); r <= M - 1; ++r)
          if (in_domain({k, r}, L, M)) best = std::max(best, af_stats(L, M, {k, r}).variance);
      CHECK(s.max_variance == best);
    }
  }
}

TEST_CASE("sidelobe bounds and monotone variance") {
  Rng rng = make_stream(2);
  for (int i = 0; i < 100; ++i) {
    const auto s = random_sequence(rng, 8, 50);
    for (int k = 0; k < 50; k += 7)
      for (int r = -7; r <= 7; ++r)
        if (in_domain({k, r}, 50, 8)) {
          const double v = af_sidelobe(s, {k, r});
          CHECK(v >= 0.0);
          CHECK(v <= (50.0 - k) / 50.0);
        }
  }
  double prev = 1.0;
  for (long L = 10; L <= 1000; L += 10) {
    const double v = af_stats(L, 32, {1, 0}).variance;
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("pmf of a fixed-length ensemble") {
  Rng rng = make_stream(4);
  std::vector<FrequencySequence> seqs;
  for (int i = 0; i < 3000; ++i) seqs.push_back(random_sequence(rng, 8, 64));
  const auto h = empirical_pmf(seqs, {1, 0}, 0.0, 0.5, 25);
  double total = 0.0;
  for (double m : h.mass) total += m;
  CHECK(total == doctest::Approx(1.0));
  CHECK(h.out_of_range == 0);
  const auto st = af_stats(64, 8, {1, 0});
  CHECK(std::abs(h.sample_mean - st.mean) < 4.0 * std::sqrt(st.variance / 3000.0));
  CHECK(h.sample_variance == doctest::Approx(st.variance).epsilon(0.1));
  CHECK_THROWS_AS(empirical_pmf({}, {1, 0}, 0.0, 1.0, 10), ParameterError);
}

TEST_CASE("discrete cross-ambiguity equals the grid sidelobe") {
  Rng rng = make_stream(8);
  for (int trial = 0; trial < 10; ++trial) {
    const int M = 4;
    const auto p = WaveformParams::make(M, 1.0, 1.0 + trial % 2);
    const long L = 2 + trial % 6;
    const auto seq = random_sequence(rng, M, L);
    const auto w = synthesize(p, seq);
    std::vector<double> delays, dopplers;
    for (long k = 0; k < L; ++k) delays.push_back(k * p.T);
    for (int r = -(M - 1); r <= M - 1; ++r) dopplers.push_back(2.0 * std::numbers::pi * r * p.delta_f);
    const auto surf = cross_ambiguity(w, delays, dopplers);
    for (long k = 0; k < L; ++k)
      for (int r = -(M - 1); r <= M - 1; ++r) {
        const GridPoint g{static_cast<int>(k), r};
        const double expect = (k == 0 && r == 0) ? 1.0 : af_sidelobe(seq, g);
        CHECK(std::abs(surf.at(static_cast<std::size_t>(k), static_cast<std::size_t>(r + M - 1)) - expect) < 1e-9);
      }
  }
}

}  // TEST_SUITE
