#include <doctest.h>

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>
#include <numbers>

#include "fskjcr/error.hpp"
#include "fskjcr/rms_crlb.hpp"
#include "fskjcr/rng.hpp"
#include "fskjcr/stats.hpp"

using namespace fskjcr;
using std::numbers::pi;

namespace {

double si_oracle(double x) {
  if (x == 0.0) return 0.0;
  auto f = [](double u) { return u == 0.0 ? 1.0 : std::sin(u) / u; };
  // piecewise over half-periods keeps each panel smooth
  double total = 0.0;
  double a = 0.0;
  while (a < x) {
    const double b = std::min(x, a + pi / 2.0);
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 6, 1e-14);
    a = b;
  }
  return total;
}

// Second term of the RMS bandwidth by the literal double sum.
double spread_double_sum(const std::vector<long>& n, double delta_f) {
  double L = 0.0;
  for (long c : n) L += static_cast<double>(c);
  double s = 0.0;
  for (std::size_t m = 0; m < n.size(); ++m)
    for (std::size_t k = m + 1; k < n.size(); ++k) {
      const double d = static_cast<double>(k) - static_cast<double>(m);
      s += static_cast<double>(n[m] * n[k]) * d * d;
    }
  const double w = 2.0 * pi * delta_f / L;
  return w * w * s;
}

}  // namespace

TEST_SUITE("rms_crlb") {

TEST_CASE("RMS time duration") {
  CHECK(rms_time_sq(300, 1.0) == doctest::Approx(7500.0));
  CHECK(rms_time_sq(1, 1.0) == doctest::Approx(1.0 / 12.0));
  CHECK(rms_time_sq(600, 1.0) == doctest::Approx(4.0 * rms_time_sq(300, 1.0)));
  CHECK_THROWS_AS(rms_time_sq(0, 1.0), ParameterError);
  CHECK_THROWS_AS(rms_time_sq(5, 0.0), ParameterError);
}

TEST_CASE("sine integral against quadrature") {
  CHECK(sine_integral(0.0) == 0.0);
  CHECK(sine_integral(pi) == doctest::Approx(1.851937051982466).epsilon(1e-13));
  double worst = 0.0;
  for (double x = 0.0; x <= 100.0; x += 0.173) worst = std::max(worst, std::abs(sine_integral(x) - si_oracle(x)));
  for (double x : {1.999999, 2.0, 2.000001, 50.0, 100.0})
    worst = std::max(worst, std::abs(sine_integral(x) - si_oracle(x)));
  CHECK(worst <= 1e-10);
  CHECK(sine_integral(-1.3) == doctest::Approx(-sine_integral(1.3)));
}

TEST_CASE("sine integral approaches pi/2 inside the 2/x envelope") {
  for (double x : {5.0, 10.0, 100.0, 1e3, 1e5, 1e8}) CHECK(std::abs(sine_integral(x) - pi / 2.0) <= 2.0 / x);
  CHECK(sine_integral(1e12) == doctest::Approx(pi / 2.0).epsilon(1e-11));
}

TEST_CASE("spread term examples") {
  const auto p = WaveformParams::make(2, 1.0, 1.0);
  const double B = 2.0;
  const double first = rms_bw_pulse_term(B, 1.0);
  CHECK(rms_bw_sq(FrequencySequence({0, 1}, 2), p, B) - first == doctest::Approx(pi * pi));
  CHECK(rms_bw_sq(FrequencySequence({1, 1, 1}, 2), p, B) - first == doctest::Approx(0.0).epsilon(1e-12));
  for (int M : {2, 4, 8, 32}) {
    std::vector<long> n(static_cast<std::size_t>(M), 5);
    CHECK(rms_bw_spread_term(n, 1.5) == doctest::Approx(4.0 * pi * pi * 2.25 * (M - 1.0) * (M + 1.0) / 12.0));
  }
  CHECK_THROWS_AS(rms_bw_pulse_term(0.0, 1.0), ParameterError);
  CHECK_THROWS_AS(rms_bw_spread_term(std::vector<long>{0, 0}, 1.0), ParameterError);
}

TEST_CASE("pulse term against direct evaluation") {
  for (double B : {0.5, 1.0, 32.0}) {
    const double u = pi * B;
    CHECK(rms_bw_pulse_term(B, 1.0) == doctest::Approx(u * u / (u * si_oracle(u) + std::cos(u) - 1.0)).epsilon(1e-10));
  }
  CHECK(default_limiting_bandwidth(WaveformParams::make(32, 1.0, 2.0)) == doctest::Approx(64.0));
}

TEST_CASE("counts identity matches the double sum and is permutation-invariant") {
  Rng rng = make_stream(6);
  const auto p = WaveformParams::make(16);
  for (int i = 0; i < 100; ++i) {
    auto seq = random_sequence(rng, 16, 1 + i * 5);
    const auto counts = seq.counts();
    CHECK(rms_bw_spread_term(counts, 1.0) == doctest::Approx(spread_double_sum(counts, 1.0)).epsilon(1e-12));
    std::vector<int> idx(seq.indices().begin(), seq.indices().end());
    std::shuffle(idx.begin(), idx.end(), rng);
    CHECK(rms_bw_sq(FrequencySequence(idx, 16), p, 16.0) == rms_bw_sq(seq, p, 16.0));
  }
}

TEST_CASE("moments by exhaustive count enumeration") {
  // Multinomial enumeration over compositions of L into M parts.
  for (int M : {2, 3}) {
    for (long L : {1L, 2L, 5L, 8L}) {
      long double s1 = 0, s2 = 0, total = 0;
      std::vector<long> n(static_cast<std::size_t>(M), 0);
      const std::function<void(int, long, long double)> rec = [&](int m, long left, long double coef) {
        if (m == M - 1) {
          n[static_cast<std::size_t>(m)] = left;
          const long double w = coef / std::tgamma(static_cast<double>(left) + 1.0);
          const long double v = rms_bw_spread_term(n, 1.0);
          total += w;
          s1 += w * v;
          s2 += w * v * v;
          return;
        }
        for (long c = 0; c <= left; ++c) {
          n[static_cast<std::size_t>(m)] = c;
          rec(m + 1, left - c, coef / std::tgamma(static_cast<double>(c) + 1.0));
        }
      };
      rec(0, L, std::tgamma(static_cast<double>(L) + 1.0));
      CHECK(static_cast<double>(total) == doctest::Approx(std::pow(M, static_cast<double>(L))));
      const double mean = static_cast<double>(s1 / total);
      const double var = static_cast<double>(s2 / total - (s1 / total) * (s1 / total));
      const auto st = rms_bw_stats(L, M, 1.0, 1.0, 1.0);
      const double first = rms_bw_pulse_term(1.0, 1.0);
      CHECK(st.mean - first == doctest::Approx(mean).epsilon(1e-10));
      CHECK(st.variance == doctest::Approx(var).epsilon(1e-9));
    }
  }
}

TEST_CASE("moments by Monte Carlo at M=4, L=64") {
  Rng rng = make_stream(10);
  RunningStats rs;
  RunningStats sq;
  const int n = 100000;
  std::vector<double> v;
  v.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double x = rms_bw_spread_term(random_sequence(rng, 4, 64).counts(), 1.0);
    rs.push(x);
    v.push_back(x);
  }
  const auto st = rms_bw_stats(64, 4, 1.0, 1.0, 4.0);
  const double first = rms_bw_pulse_term(4.0, 1.0);
  CHECK(std::abs(rs.mean() - (st.mean - first)) < 3.0 * std::sqrt(st.variance / n));
  double m4 = 0.0;
  for (double x : v) m4 += std::pow(x - rs.mean(), 4);
  m4 /= n;
  const double var_se = std::sqrt((m4 - rs.variance() * rs.variance()) / n);
  CHECK(std::abs(rs.variance() - st.variance) < 3.0 * var_se);
}

TEST_CASE("variance vanishes and mean converges to the uniform value") {
  CHECK(rms_bw_stats(1, 32, 1.0, 1.0, 32.0).variance == 0.0);
  double prev = std::numeric_limits<double>::infinity();
  for (long L : {10L, 100L, 1000L, 10000L, 100000L}) {
    const auto st = rms_bw_stats(L, 32, 1.0, 1.0, 32.0);
    CHECK(st.variance < prev);
    prev = st.variance;
  }
  const double u = rms_bw_uniform(32, 1.0, 1.0, 32.0);
  CHECK(std::abs(rms_bw_stats(1000000, 32, 1.0, 1.0, 32.0).mean - u) / u < 1e-5);
}

TEST_CASE("uniform counts sit inside the sampled range and below the exhaustive maximum") {
  // M=2: the spread term peaks at a balanced split, so uniform counts are the
  // maximum there; the sampled values never exceed it.
  for (long L = 2; L <= 8; L += 2) {
    double best = 0.0;
    for (long c = 0; c <= L; ++c) best = std::max(best, rms_bw_spread_term(std::vector<long>{c, L - c}, 1.0));
    CHECK(best == doctest::Approx(rms_bw_spread_term(std::vector<long>{L / 2, L / 2}, 1.0)));
    Rng rng = make_stream(static_cast<std::uint64_t>(L));
    for (int i = 0; i < 200; ++i) CHECK(rms_bw_spread_term(random_sequence(rng, 2, L).counts(), 1.0) <= best * (1 + 1e-12));
  }
}

TEST_CASE("CRLB forms") {
  CHECK(crlb_doppler(1.0, 7500.0) == doctest::Approx(1.0 / 7500.0));
  CHECK(crlb_delay(2.0, 5.0) == doctest::Approx(0.5 * crlb_delay(1.0, 5.0)));
  CHECK(crlb_doppler(2.0, 5.0) == doctest::Approx(0.5 * crlb_doppler(1.0, 5.0)));
  CHECK_THROWS_AS(crlb_delay(0.0, 1.0), ParameterError);
  CHECK_THROWS_AS(crlb_doppler(1.0, -1.0), ParameterError);
  const auto p = WaveformParams::make(4);
  const auto r = rms_report(FrequencySequence({0, 1, 2, 3}, 4), p, 4.0);
  CHECK(r.sigma_t_sq == doctest::Approx(16.0 / 12.0));
  CHECK(r.sigma_w_sq > 0.0);
}

}  // TEST_SUITE
