#include "fskjcr/hitting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fskjcr/error.hpp"
#include "fskjcr/quadrature.hpp"
#include "fskjcr/stopper.hpp"

namespace fskjcr {

namespace {

constexpr double kStart = 1.0 + 1e-9;
constexpr double kCdfTol = 1e-8;

void require_x(double x) {
  if (!(x > 1.0)) throw ParameterError("boundary is defined for x > 1 only");
}

// Spread of the tangent density in t: the exponent is about -(a t - c)^2 / 4c.
double tangent_scale(const HittingModel& m) { return std::sqrt(2.0 * m.c()) / m.a(); }

// Integrates the tangent density over [lo, hi] in pieces no wider than a
// fraction of its spread, so the adaptive rule cannot step over the peak.
double integrate_tangent(const HittingModel& m, double lo, double hi, double tol) {
  if (hi <= lo) return 0.0;
  const double width = std::max(0.25 * tangent_scale(m), 1e-3);
  const long pieces = std::clamp(static_cast<long>(std::ceil((hi - lo) / width)), 1L, 100000L);
  const double step = (hi - lo) / static_cast<double>(pieces);
  auto f = [&m](double t) { return tangent_pdf(t, m); };
  double sum = 0.0;
  for (long i = 0; i < pieces; ++i) {
    const double a = lo + step * static_cast<double>(i);
    const double b = (i + 1 == pieces) ? hi : a + step;
    sum += integrate_adaptive(f, a, b, tol / static_cast<double>(pieces)).value;
  }
  return sum;
}

// Upper limit past which the tangent density is negligible.
double tangent_upper(const HittingModel& m) { return m.c() / m.a() + 60.0 * tangent_scale(m) + 10.0; }

}  // namespace

HittingModel::HittingModel(int M_, double gamma2_) : M(M_), gamma2(gamma2_) { validate(); }

void HittingModel::validate() const {
  if (M < 2) throw ParameterError("hitting model needs M >= 2");
  if (!(gamma2 > 0.0) || !std::isfinite(gamma2)) throw ParameterError("hitting model needs gamma2 > 0");
}

double chi2_mean(int M) {
  if (M < 2) throw ParameterError("chi2_mean needs M >= 2");
  return M - 1.0;
}

double chi2_var(int M, long L) {
  if (M < 2 || L < 1) throw ParameterError("chi2_var needs M >= 2 and L >= 1");
  return 2.0 * (M - 1.0) * (1.0 - 1.0 / static_cast<double>(L));
}

double chi2_corr_exact(long L, long k) {
  if (L < 2 || k < 0) throw ParameterError("chi2_corr needs L >= 2 and k >= 0");
  const double l = static_cast<double>(L);
  const double lk = static_cast<double>(L + k);
  return ((l - 1.0) / lk) / std::sqrt((1.0 - 1.0 / l) * (1.0 - 1.0 / lk));
}

double chi2_corr_approx(long L, long k) {
  if (L < 2 || k < 0) throw ParameterError("chi2_corr needs L >= 2 and k >= 0");
  return static_cast<double>(L) / static_cast<double>(L + k);
}

double chi2_bm(const HittingModel& model, double t, double w) {
  if (!(t >= 1.0)) throw ParameterError("chi2_bm needs t >= 1");
  return model.c() + std::sqrt(2.0 * model.c() * (1.0 - 1.0 / t)) * w / t;
}

double boundary_b(double x, const HittingModel& model) {
  require_x(x);
  const double s = std::sqrt(x);
  return (model.a() * x - model.c() * s) / std::sqrt(2.0 * model.c() * (1.0 - 1.0 / s));
}

double boundary_db(double x, const HittingModel& model) {
  require_x(x);
  const double a = model.a();
  const double c = model.c();
  const double s = std::sqrt(x);
  const double d = 1.0 - 1.0 / s;
  return (a * x - (1.25 * a + 0.5 * c) * s + 0.75 * c) / (std::sqrt(2.0 * c) * d * std::sqrt(d) * x);
}

double tangent_pdf(double t, const HittingModel& model) {
  if (!(t > 1.0)) throw ParameterError("tangent density is defined for t > 1 only");
  const double a = model.a();
  const double c = model.c();
  const double d = 1.0 - 1.0 / t;
  const double num = (c - 0.5 * a) * t - 0.5 * c;
  const double z = a * t - c;
  const double expo = -(z * z) / (4.0 * c * d);
  if (expo < -745.0) return 0.0;
  return num / (std::sqrt(2.0 * std::numbers::pi) * std::sqrt(2.0 * c) * d * std::sqrt(d) * t * t) *
         std::exp(expo);
}

double tangent_cdf(double t, const HittingModel& model) {
  if (!(t > 1.0)) throw ParameterError("tangent CDF is defined for t > 1 only");
  if (t <= kStart) return 0.0;
  return integrate_tangent(model, kStart, t, kCdfTol);
}

std::vector<double> tangent_cdf_table(std::span<const double> ts, const HittingModel& model) {
  std::vector<double> out;
  out.reserve(ts.size());
  double prev = kStart;
  double acc = 0.0;
  for (double t : ts) {
    if (!(t > 1.0)) throw ParameterError("tangent CDF is defined for t > 1 only");
    if (t < prev && !out.empty()) throw ParameterError("tangent_cdf_table needs ascending t");
    if (t > prev) {
      acc += integrate_tangent(model, prev, t, kCdfTol);
      prev = t;
    }
    out.push_back(acc);
  }
  return out;
}

double tangent_mass(const HittingModel& model) {
  return integrate_tangent(model, kStart, tangent_upper(model), kCdfTol);
}

HitSample simulate_brownian_hit(Rng& rng, const HittingModel& model, long t_max, double shift) {
  if (t_max < 2) throw ParameterError("simulate_brownian_hit needs t_max > 1");
  if (model.c() <= model.a()) return {1, false};
  std::normal_distribution<double> gauss(0.0, 1.0);
  double w = gauss(rng);  // W(1)
  for (long t = 2; t <= t_max; ++t) {
    w += std::sqrt(2.0 * static_cast<double>(t) - 1.0) * gauss(rng);
    const double x = static_cast<double>(t) * static_cast<double>(t);
    if (w <= boundary_b(x, model) + shift) return {t, false};
  }
  return {t_max, true};
}

std::vector<HitSample> empirical_hitting_samples(Rng& rng, const HittingModel& model, long runs,
                                                 long t_max) {
  if (runs < 1) throw ParameterError("runs must be >= 1");
  const StoppingConfig cfg = StoppingConfig::flatness_only(model.gamma2, t_max);
  std::uniform_int_distribution<int> tone(0, model.M - 1);
  std::vector<HitSample> out;
  out.reserve(static_cast<std::size_t>(runs));
  for (long i = 0; i < runs; ++i) {
    SpectrumState state(model.M);
    StopDecision d;
    do {
      state.push(tone(rng));
      d = decide(state, cfg);
    } while (!d.stopped);
    out.push_back({d.L, d.forced});
  }
  return out;
}

std::vector<HitSample> brownian_hitting_samples(Rng& rng, const HittingModel& model, long runs,
                                                long t_max) {
  if (runs < 1) throw ParameterError("runs must be >= 1");
  std::vector<HitSample> out;
  out.reserve(static_cast<std::size_t>(runs));
  for (long i = 0; i < runs; ++i) out.push_back(simulate_brownian_hit(rng, model, t_max));
  return out;
}

EmpiricalCdf hitting_cdf(std::span<const HitSample> samples) {
  std::vector<double> v;
  v.reserve(samples.size());
  for (const auto& s : samples) v.push_back(static_cast<double>(s.L0));
  return EmpiricalCdf(std::move(v));
}

Gamma2Solution gamma2_for_quantile(long L1, double alpha, int M) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
  if (L1 < 2) throw ParameterError("L1 must exceed 1");
  if (M < 2) throw ParameterError("M must be >= 2");
  const double target = 1.0 - alpha;
  const double t = static_cast<double>(L1);
  auto F = [&](double log_g) { return tangent_cdf(t, HittingModel(M, std::exp(log_g))); };

  // Scan upward on a log grid for the first crossing of the target. The
  // tangent mass itself shrinks as gamma2 grows, so F(L1) is only monotone
  // below the crossing region; monotonicity is checked inside the bracket.
  const double g_min = std::log(1e-12);
  const double g_max = std::log(0.999 * (M - 1.0) / (static_cast<double>(M) * M));
  constexpr int kScan = 64;
  double lo = g_min;
  double hi = g_min;
  double f_lo = F(g_min);
  if (f_lo >= target) throw NumericalError("target quantile already met at the smallest gamma2");
  bool found = false;
  for (int i = 1; i <= kScan; ++i) {
    const double g = g_min + (g_max - g_min) * i / kScan;
    const double v = F(g);
    if (v >= target) {
      hi = g;
      found = true;
      break;
    }
    lo = g;
    f_lo = v;
  }
  if (!found) throw NumericalError("gamma2 bracket does not contain the requested quantile");
  constexpr int kCheck = 16;
  double prev = f_lo;
  for (int i = 1; i <= kCheck; ++i) {
    const double v = F(lo + (hi - lo) * i / kCheck);
    if (v < prev - 1e-7) throw NumericalError("tangent CDF is not monotone in gamma2 over the bracket");
    prev = v;
  }

  Gamma2Solution sol;
  while (hi - lo > 1e-8) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = F(mid);
    if (f_mid < target) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++sol.iterations;
  }
  const double mid = 0.5 * (lo + hi);
  sol.gamma2 = std::exp(mid);
  sol.achieved = F(mid);
  return sol;
}

}  // namespace fskjcr
