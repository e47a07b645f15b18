#pragma once

#include <span>
#include <vector>

#include "fskjcr/rng.hpp"
#include "fskjcr/stats.hpp"

namespace fskjcr {

/// First passage of the flatness statistic below gamma2, modelled through the
/// chi-squared process chi^2(L) = L M^2 U(L).
///
/// With a = gamma2 M^2 and c = M - 1 the requirement chi^2(t) <= a t becomes,
/// for the Brownian surrogate chi^2_BM(t) = c + sqrt(2c(1 - 1/t)) W(t^2) / t,
/// the lower-boundary condition W(x) <= b(x) at x = t^2.
struct HittingModel {
  int M = 32;
  double gamma2 = 1e-4;

  HittingModel() = default;
  HittingModel(int M, double gamma2);

  double a() const { return gamma2 * M * static_cast<double>(M); }
  double c() const { return M - 1.0; }
  void validate() const;
};

struct HitSample {
  long L0 = 1;
  bool forced = false;
};

double chi2_mean(int M);
double chi2_var(int M, long L);
/// corr(chi^2(L), chi^2(L+k)) for i.i.d. uniform tones.
double chi2_corr_exact(long L, long k);
/// Large-L form L / (L + k).
double chi2_corr_approx(long L, long k);

/// Brownian surrogate value at subpulse count t given W(t^2).
double chi2_bm(const HittingModel& model, double t, double w);

/// b(x) = (a x - c sqrt(x)) / sqrt(2c (1 - 1/sqrt(x))), x > 1.
double boundary_b(double x, const HittingModel& model);
/// db/dx = (a x - (5a/4 + c/2) sqrt(x) + 3c/4) / (sqrt(2c) (1 - 1/sqrt(x))^{3/2} x).
double boundary_db(double x, const HittingModel& model);

/// Tangent approximation to the density of the first t at which W(t^2)
/// meets b(t^2) from above:
///   f(t) = ((c - a/2) t - c/2) / (sqrt(2 pi) sqrt(2c) (1 - 1/t)^{3/2} t^2)
///          * exp(-(a t - c)^2 / (4c (1 - 1/t))).
double tangent_pdf(double t, const HittingModel& model);

/// Integral of tangent_pdf from 1 to t. Not renormalized.
double tangent_cdf(double t, const HittingModel& model);

/// tangent_cdf at every t of an ascending list, integrated segment by segment.
std::vector<double> tangent_cdf_table(std::span<const double> ts, const HittingModel& model);

/// Total mass of the tangent density over (1, inf).
double tangent_mass(const HittingModel& model);

/// One path of W sampled at x = t^2 for integer t. At t = 1 the surrogate is
/// deterministic (chi^2 = M - 1); from t = 2 the path hits when
/// W(t^2) <= b(t^2) + shift. Forced at t_max when no hit occurs.
HitSample simulate_brownian_hit(Rng& rng, const HittingModel& model, long t_max, double shift = 0.0);

/// L0 of `runs` dynamic FSK waveforms stopped by flatness alone (gamma1 =
/// gamma3 = 1), capped at t_max.
std::vector<HitSample> empirical_hitting_samples(Rng& rng, const HittingModel& model, long runs,
                                                 long t_max);

/// Brownian counterpart of empirical_hitting_samples.
std::vector<HitSample> brownian_hitting_samples(Rng& rng, const HittingModel& model, long runs,
                                                long t_max);

/// Empirical CDF of L0 (forced samples enter at their cap).
EmpiricalCdf hitting_cdf(std::span<const HitSample> samples);

struct Gamma2Solution {
  double gamma2 = 0.0;
  double achieved = 0.0;  ///< tangent_cdf(L1) at the returned gamma2
  int iterations = 0;
};

/// gamma2 such that tangent_cdf(L1) = 1 - alpha, by bisection on log gamma2
/// inside the first log-grid cell of [1e-12, (M-1)/M^2) where the CDF reaches
/// the target. Throws NumericalError when no cell does or the CDF is not
/// monotone in gamma2 inside the cell.
Gamma2Solution gamma2_for_quantile(long L1, double alpha, int M);

}  // namespace fskjcr
