#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "fskjcr/error.hpp"
#include "fskjcr/hitting.hpp"
#include "fskjcr/stopper.hpp"

using namespace fskjcr;

namespace {

const HittingModel kRef(32, 1e-4);

// Lower-boundary tangent density written through b and db/dx directly.
double generic_tangent(double t, const HittingModel& m) {
  const double x = t * t;
  const double b = boundary_b(x, m);
  const double db = boundary_db(x, m);
  const double z = b / std::sqrt(x);
  const double phi = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
  return 2.0 * t * (x * db - b) / std::pow(x, 1.5) * phi;
}

double cdf_oracle(double t, const HittingModel& m) {
  auto f = [&](double s) { return tangent_pdf(s, m); };
  double total = 0.0;
  double a = 1.0 + 1e-9;
  while (a < t) {
    const double b = std::min(t, a + 5.0);
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 10, 1e-12);
    a = b;
  }
  return total;
}

double skewness(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double m2 = 0.0, m3 = 0.0;
  for (double x : v) {
    m2 += (x - m) * (x - m);
    m3 += (x - m) * (x - m) * (x - m);
  }
  m2 /= static_cast<double>(v.size());
  m3 /= static_cast<double>(v.size());
  return m3 / std::pow(m2, 1.5);
}

}  // namespace

TEST_SUITE("hitting") {

TEST_CASE("model validation") {
  CHECK_THROWS_AS(HittingModel(1, 1e-4), ParameterError);
  CHECK_THROWS_AS(HittingModel(32, 0.0), ParameterError);
  CHECK(kRef.a() == doctest::Approx(0.1024));
  CHECK(kRef.c() == 31.0);
}

TEST_CASE("chi-squared moments: closed forms") {
  CHECK(chi2_mean(32) == 31.0);
  CHECK(chi2_var(32, 1) == 0.0);
  CHECK(chi2_mean(2) == 1.0);
  CHECK(chi2_var(2, 2) == doctest::Approx(1.0));
}

TEST_CASE("chi-squared moments: exhaustive enumeration") {
  for (int M : {2, 3}) {
    const int Lmax = M == 2 ? 10 : 7;
    for (int L = 1; L <= Lmax; ++L) {
      long double s1 = 0, s2 = 0;
      long total = 1;
      for (int i = 0; i < L; ++i) total *= M;
      for (long code = 0; code < total; ++code) {
        SpectrumState s(M);
        long c = code;
        for (int i = 0; i < L; ++i) {
          s.push(static_cast<int>(c % M));
          c /= M;
        }
        const long double x = chi2_of(s);
        s1 += x;
        s2 += x * x;
      }
      const double mean = static_cast<double>(s1 / total);
      const double var = static_cast<double>(s2 / total - (s1 / total) * (s1 / total));
      CHECK(std::abs(mean - chi2_mean(M)) < 1e-12);
      CHECK(std::abs(var - chi2_var(M, L)) < 1e-12);
    }
  }
}

TEST_CASE("chi-squared lag correlation") {
  CHECK(chi2_corr_exact(50, 0) == doctest::Approx(1.0));
  CHECK(chi2_corr_approx(50, 0) == 1.0);
  CHECK(std::abs(chi2_corr_approx(100, 100) - chi2_corr_exact(100, 100)) < 1e-2 * (100.0 / 100.0));
  for (long L : {100L, 1000L, 10000L}) {
    const double gap = std::abs(chi2_corr_approx(L, 50) - chi2_corr_exact(L, 50));
    CHECK(gap < 2.0 * 50.0 / (static_cast<double>(L) * L));
  }
  CHECK_THROWS_AS(chi2_corr_exact(1, 3), ParameterError);

  Rng rng = make_stream(31);
  std::uniform_int_distribution<int> tone(0, 15);
  const int n = 100000;
  std::vector<double> x(n), y(n);
  for (int i = 0; i < n; ++i) {
    SpectrumState s(16);
    for (int l = 0; l < 200; ++l) s.push(tone(rng));
    x[static_cast<std::size_t>(i)] = chi2_of(s);
    for (int l = 0; l < 100; ++l) s.push(tone(rng));
    y[static_cast<std::size_t>(i)] = chi2_of(s);
  }
  double mx = 0, my = 0;
  for (int i = 0; i < n; ++i) {
    mx += x[static_cast<std::size_t>(i)];
    my += y[static_cast<std::size_t>(i)];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    const double dx = x[static_cast<std::size_t>(i)] - mx, dy = y[static_cast<std::size_t>(i)] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  const double rho = sxy / std::sqrt(sxx * syy);
  const double ex = chi2_corr_exact(200, 100);
  const double se = (1.0 - ex * ex) / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(rho - ex) < 3.0 * se);
}

TEST_CASE("standardized chi-squared skewness shrinks with M") {
  Rng rng = make_stream(37);
  double prev = std::numeric_limits<double>::infinity();
  for (int M : {4, 16, 64}) {
    std::uniform_int_distribution<int> tone(0, M - 1);
    std::vector<double> v;
    for (int i = 0; i < 20000; ++i) {
      SpectrumState s(M);
      for (int l = 0; l < 500; ++l) s.push(tone(rng));
      v.push_back(chi2_of(s));
    }
    const double g = std::abs(skewness(v));
    CHECK(g < prev);
    CHECK(g == doctest::Approx(std::sqrt(8.0 / (M - 1.0))).epsilon(0.15));
    prev = g;
  }
}

TEST_CASE("Brownian surrogate moments") {
  Rng rng = make_stream(41);
  std::normal_distribution<double> gauss;
  const HittingModel m(16, 1e-4);
  const int n = 50000;
  const long t1 = 50, t2 = 80;
  std::vector<double> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    const double w1 = gauss(rng) * static_cast<double>(t1);
    const double w2 = w1 + gauss(rng) * std::sqrt(static_cast<double>(t2 * t2 - t1 * t1));
    a[static_cast<std::size_t>(i)] = chi2_bm(m, static_cast<double>(t1), w1);
    b[static_cast<std::size_t>(i)] = chi2_bm(m, static_cast<double>(t2), w2);
  }
  RunningStats ra, rb;
  for (int i = 0; i < n; ++i) {
    ra.push(a[static_cast<std::size_t>(i)]);
    rb.push(b[static_cast<std::size_t>(i)]);
  }
  const double va = chi2_var(16, t1);
  CHECK(std::abs(ra.mean() - chi2_mean(16)) < 4.0 * std::sqrt(va / n));
  CHECK(ra.variance() == doctest::Approx(va).epsilon(0.03));
  CHECK(rb.variance() == doctest::Approx(chi2_var(16, t2)).epsilon(0.03));
  double sab = 0.0;
  for (int i = 0; i < n; ++i)
    sab += (a[static_cast<std::size_t>(i)] - ra.mean()) * (b[static_cast<std::size_t>(i)] - rb.mean());
  const double rho = sab / (n - 1) / std::sqrt(ra.variance() * rb.variance());
  CHECK(std::abs(rho - chi2_corr_approx(t1, t2 - t1)) < 0.02);
}

TEST_CASE("boundary root and domain") {
  const double root = kRef.c() / kRef.a();
  CHECK(root == doctest::Approx(302.734375));
  CHECK(std::abs(boundary_b(root * root, kRef)) < 1e-9);
  CHECK(boundary_b(0.9 * root * 0.9 * root, kRef) < 0.0);
  CHECK(boundary_b(1.1 * root * 1.1 * root, kRef) > 0.0);
  CHECK_THROWS_AS(boundary_b(1.0, kRef), ParameterError);
  CHECK_THROWS_AS(boundary_db(0.5, kRef), ParameterError);
}

TEST_CASE("boundary derivative against central differences") {
  for (const HittingModel& m : {kRef, HittingModel(8, 3e-3), HittingModel(64, 1e-5)}) {
    for (double x : {1.5, 4.0, 100.0, 1e4, 1e5, 9.1e4, 1e6}) {
      const double h = 1e-5 * x;
      const double fd = (boundary_b(x + h, m) - boundary_b(x - h, m)) / (2.0 * h);
      const double db = boundary_db(x, m);
      CHECK(std::abs(db - fd) <= 1e-6 * std::max(std::abs(db), 1e-12));
    }
  }
}

TEST_CASE("tangent density agrees with the generic boundary form") {
  for (const HittingModel& m : {kRef, HittingModel(8, 3e-3), HittingModel(16, 5e-4)}) {
    for (double t = 1.05; t < 2000.0; t *= 1.07) {
      const double f = tangent_pdf(t, m);
      const double g = generic_tangent(t, m);
      CHECK(std::abs(f - g) <= 1e-9 * std::max(std::abs(g), 1e-300) + 1e-300);
    }
  }
  CHECK_THROWS_AS(tangent_pdf(1.0, kRef), ParameterError);
  CHECK_THROWS_AS(tangent_cdf(0.5, kRef), ParameterError);
}

TEST_CASE("tangent density is nonnegative and the CDF nondecreasing") {
  double prev = 0.0;
  for (int i = 1; i <= 10000; ++i) {
    const double t = 1.0 + i * 0.2;
    CHECK(tangent_pdf(t, kRef) >= 0.0);
  }
  std::vector<double> ts;
  for (double t = 2.0; t <= 2000.0; t += 7.0) ts.push_back(t);
  const auto table = tangent_cdf_table(ts, kRef);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    CHECK(table[i] >= prev);
    prev = table[i];
  }
  CHECK(prev == doctest::Approx(tangent_mass(kRef)).epsilon(1e-6));
}

TEST_CASE("tangent CDF against an independent quadrature") {
  for (double t : {150.0, 200.0, 300.0, 450.0, 800.0}) {
    CHECK(std::abs(tangent_cdf(t, kRef) - cdf_oracle(t, kRef)) < 1e-7);
  }
  const std::vector<double> ts{150.0, 300.0, 450.0};
  const auto table = tangent_cdf_table(ts, kRef);
  for (std::size_t i = 0; i < ts.size(); ++i) CHECK(std::abs(table[i] - tangent_cdf(ts[i], kRef)) < 1e-7);
}

TEST_CASE("tangent CDF is centred near L = 300") {
  const double f = tangent_cdf(300.0, kRef);
  CHECK(f >= 0.35);
  CHECK(f <= 0.65);
}

TEST_CASE("Brownian path edge cases") {
  Rng rng = make_stream(43);
  const double inf = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 20; ++i) {
    const auto up = simulate_brownian_hit(rng, kRef, 500, inf);
    CHECK(up.L0 == 2);
    CHECK_FALSE(up.forced);
    const auto down = simulate_brownian_hit(rng, kRef, 500, -inf);
    CHECK(down.forced);
    CHECK(down.L0 == 500);
  }
  const HittingModel loose(32, 31.0 / 1024.0);
  CHECK(simulate_brownian_hit(rng, loose, 100).L0 == 1);
  CHECK_THROWS_AS(simulate_brownian_hit(rng, kRef, 1), ParameterError);
}

TEST_CASE("loosest threshold puts all empirical mass at L0 = 1") {
  Rng rng = make_stream(47);
  const auto s = empirical_hitting_samples(rng, HittingModel(32, 31.0 / 1024.0), 500, 1000);
  for (const auto& h : s) CHECK(h.L0 == 1);
  CHECK(hitting_cdf(s)(1.0) == 1.0);
}

TEST_CASE("empirical hitting distribution matches the stopper") {
  Rng rng = make_stream(53);
  const auto s = empirical_hitting_samples(rng, kRef, 3000, 5000);
  const auto cdf = hitting_cdf(s);
  CHECK(cdf.below(200.0) == doctest::Approx(0.10).epsilon(0.3));
  CHECK(cdf(450.0) - cdf.below(150.0) >= 0.9);
  for (const auto& h : s) CHECK_FALSE(h.forced);
}

TEST_CASE("gamma2 solver") {
  const auto sol = gamma2_for_quantile(450, 0.1, 32);
  CHECK(std::abs(sol.achieved - 0.9) < 1e-4);
  CHECK(std::abs(tangent_cdf(450.0, HittingModel(32, sol.gamma2)) - 0.9) < 1e-4);
  CHECK(sol.gamma2 > 1e-5);
  CHECK(sol.gamma2 < 1e-3);

  double prev = std::numeric_limits<double>::infinity();
  for (double alpha : {0.02, 0.05, 0.1, 0.2, 0.4}) {
    const double g = gamma2_for_quantile(450, alpha, 32).gamma2;
    CHECK(g < prev);
    prev = g;
  }
  CHECK_THROWS_AS(gamma2_for_quantile(450, 0.0, 32), ParameterError);
  CHECK_THROWS_AS(gamma2_for_quantile(1, 0.1, 32), ParameterError);

  Rng rng = make_stream(59);
  const auto s = empirical_hitting_samples(rng, HittingModel(32, sol.gamma2), 4000, 20000);
  const double emp = hitting_cdf(s)(450.0);
  CHECK(std::abs(emp - 0.9) < 0.1);
}

}  // TEST_SUITE
