#include "fskjcr/rms_crlb.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "fskjcr/error.hpp"

namespace fskjcr {

double rms_time_sq(long L, double T) {
  if (L < 1 || !(T > 0.0)) throw ParameterError("rms_time_sq needs L >= 1 and T > 0");
  const double l = static_cast<double>(L);
  return l * l * T * T / 12.0;
}

double sine_integral(double x) {
  if (x < 0.0) return -sine_integral(-x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return std::numbers::pi / 2.0;

  if (x <= 2.0) {
    // sum (-1)^n x^(2n+1) / ((2n+1) (2n+1)!)
    const double x2 = x * x;
    double term = x;  // x^(2n+1)/(2n+1)!
    double sum = x;
    for (int n = 1; n < 40; ++n) {
      term *= -x2 / ((2.0 * n) * (2.0 * n + 1.0));
      const double add = term / (2.0 * n + 1.0);
      sum += add;
      if (std::abs(add) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
  }

  // E1(ix) by modified Lentz on the continued fraction
  // E1(z) = e^{-z} / (z + 1 - 1^2/(z + 3 - 2^2/(z + 5 - ...))),
  // then Si(x) = pi/2 + Im(E1(ix)).
  using cd = std::complex<double>;
  constexpr double tiny = 1e-300;
  cd b(1.0, x);
  cd c(1.0 / tiny, 0.0);
  cd d = 1.0 / b;
  cd h = d;
  for (int i = 2; i < 10000; ++i) {
    const double a = -static_cast<double>(i - 1) * static_cast<double>(i - 1);
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const cd del = c * d;
    h *= del;
    if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < 1e-16) break;
  }
  h *= cd(std::cos(x), -std::sin(x));
  return std::numbers::pi / 2.0 + h.imag();
}

double rms_bw_pulse_term(double B, double T) {
  if (!(B > 0.0) || !(T > 0.0)) throw ParameterError("limiting bandwidth B and T must be positive");
  const double u = std::numbers::pi * B * T;
  const double pb = std::numbers::pi * B;
  return pb * pb / (u * sine_integral(u) + std::cos(u) - 1.0);
}

double rms_bw_spread_term(std::span<const long> counts, double delta_f) {
  double L = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  for (std::size_t m = 0; m < counts.size(); ++m) {
    const double n = static_cast<double>(counts[m]);
    const double md = static_cast<double>(m);
    L += n;
    s1 += n * md;
    s2 += n * md * md;
  }
  if (L <= 0.0) throw ParameterError("rms bandwidth needs a nonempty sequence");
  const double w = 2.0 * std::numbers::pi * delta_f / L;
  // counts are integers, so L*s2 - s1^2 is exact in double for realistic L, M
  return w * w * (L * s2 - s1 * s1);
}

double rms_bw_sq(const FrequencySequence& seq, const WaveformParams& params, double B) {
  const auto counts = seq.counts();
  return rms_bw_pulse_term(B, params.T) + rms_bw_spread_term(counts, params.delta_f);
}

double default_limiting_bandwidth(const WaveformParams& params) { return params.M * params.delta_f; }

RmsBwStats rms_bw_stats(long L, int M, double delta_f, double T, double B) {
  if (L < 1 || M < 2) throw ParameterError("rms_bw_stats needs L >= 1 and M >= 2");
  const double l = static_cast<double>(L);
  const double m = M;
  const double w = 2.0 * std::numbers::pi * delta_f;
  const double w2 = w * w;
  RmsBwStats s;
  s.mean = rms_bw_pulse_term(B, T) + w2 * (l - 1.0) * (m + 1.0) * (m - 1.0) / (12.0 * l);
  s.variance = w2 * w2 * (l - 1.0) * (m + 1.0) * (m - 1.0) *
               (2.0 * l * m * m - 8.0 * l + 3.0 * m * m + 3.0) / (360.0 * l * l * l);
  return s;
}

double rms_bw_uniform(int M, double delta_f, double T, double B) {
  const double m = M;
  const double w = 2.0 * std::numbers::pi * delta_f;
  return rms_bw_pulse_term(B, T) + w * w * (m + 1.0) * (m - 1.0) / 12.0;
}

RmsReport rms_report(const FrequencySequence& seq, const WaveformParams& params, double B) {
  return {rms_time_sq(static_cast<long>(seq.size()), params.T), rms_bw_sq(seq, params, B), B};
}

double crlb_delay(double C, double sigma_w_sq) {
  if (!(C > 0.0) || !(sigma_w_sq > 0.0)) throw ParameterError("crlb_delay needs C > 0 and sigma_w^2 > 0");
  return 1.0 / (C * sigma_w_sq);
}

double crlb_doppler(double C, double sigma_t_sq) {
  if (!(C > 0.0) || !(sigma_t_sq > 0.0)) throw ParameterError("crlb_doppler needs C > 0 and sigma_t^2 > 0");
  return 1.0 / (C * sigma_t_sq);
}

}  // namespace fskjcr
