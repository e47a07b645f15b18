#pragma once

#include <span>

#include "fskjcr/fsk.hpp"

namespace fskjcr {

/// Squared RMS time duration L^2 T^2 / 12.
double rms_time_sq(long L, double T);

/// Si(x) = int_0^x sin(u)/u du. Power series for |x| <= 2, continued
/// fraction of E1(ix) beyond; absolute error below 1e-13 on [0, inf).
double sine_integral(double x);

/// (pi B)^2 / (pi B T Si(pi B T) + cos(pi B T) - 1): the band-limited
/// rectangular-pulse contribution to the squared RMS bandwidth.
double rms_bw_pulse_term(double B, double T);

/// (2 pi delta_f / L)^2 sum_{m<n} N_m N_n (m-n)^2, evaluated from the counts
/// through L sum N_m m^2 - (sum N_m m)^2.
double rms_bw_spread_term(std::span<const long> counts, double delta_f);

/// Squared RMS bandwidth [(rad/s)^2] of an FSK sequence; B is the limiting
/// bandwidth of the pulse shaping.
double rms_bw_sq(const FrequencySequence& seq, const WaveformParams& params, double B);

/// Default limiting bandwidth M * delta_f.
double default_limiting_bandwidth(const WaveformParams& params);

struct RmsBwStats {
  double mean = 0.0;
  double variance = 0.0;
};

/// Moments of rms_bw_sq over i.i.d. uniform sequences of length L.
RmsBwStats rms_bw_stats(long L, int M, double delta_f, double T, double B);

/// Limit L -> inf of the mean; equals the uniform-spectrum value.
double rms_bw_uniform(int M, double delta_f, double T, double B);

struct RmsReport {
  double sigma_t_sq = 0.0;
  double sigma_w_sq = 0.0;
  double B = 0.0;
};

RmsReport rms_report(const FrequencySequence& seq, const WaveformParams& params, double B);

/// Delay CRLB 1 / (C sigma_w^2).
double crlb_delay(double C, double sigma_w_sq);
/// Doppler CRLB 1 / (C sigma_t^2).
double crlb_doppler(double C, double sigma_t_sq);

}  // namespace fskjcr
