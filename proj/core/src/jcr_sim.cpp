#include "fskjcr/jcr_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fskjcr/error.hpp"
#include "fskjcr/rms_crlb.hpp"

namespace fskjcr {

double ChannelScenario::n0(long L, double T) const {
  if (std::isinf(snr)) return 0.0;
  return sigma_b_sq * static_cast<double>(L) * T / snr;
}

void ChannelScenario::validate() const {
  if (!(sigma_b_sq >= 0.0)) throw ParameterError("reflection variance must be >= 0");
  if (!(snr > 0.0)) throw ParameterError("SNR must be positive");
  if (!(window >= 0.0)) throw ParameterError("observation window must be >= 0");
  if (!std::isfinite(tau_true) || !std::isfinite(omega_true)) throw ParameterError("target must be finite");
}

double db_to_linear(double db) {
  if (std::isinf(db) && db > 0) return std::numeric_limits<double>::infinity();
  return std::pow(10.0, db / 10.0);
}

SearchGrid SearchGrid::centered(double tau, double omega, double tau_step, int tau_half, double omega_step,
                                int omega_half) {
  SearchGrid g;
  g.tau_step = tau_step;
  g.omega_step = omega_step;
  g.n_tau = 2 * tau_half + 1;
  g.n_omega = 2 * omega_half + 1;
  g.tau_min = tau - tau_step * tau_half;
  g.omega_min = omega - omega_step * omega_half;
  g.validate();
  return g;
}

SearchGrid SearchGrid::standard(const WaveformParams& params, double tau, double omega, long L_max) {
  if (L_max < 1) throw ParameterError("grid L_max must be >= 1");
  const double T = params.T;
  const double bin = 2.0 * std::numbers::pi / (static_cast<double>(L_max) * T);
  return centered(tau, omega, T / 8.0, 16, bin / 8.0, 8);
}

void SearchGrid::validate() const {
  if (n_tau < 1 || n_omega < 1) throw ParameterError("search grid needs at least one point per axis");
  if ((n_tau > 1 && !(tau_step > 0.0)) || (n_omega > 1 && !(omega_step > 0.0))) {
    throw ParameterError("search grid steps must be positive");
  }
}

cvec delayed_replica(const SampledWaveform& w, double tau, std::size_t count) {
  const auto N = static_cast<long>(w.samples.size());
  const double shift = tau * w.sample_rate;
  auto at = [&](long m) -> std::complex<double> {
    return (m >= 0 && m < N) ? w.samples[static_cast<std::size_t>(m)] : std::complex<double>{};
  };
  double whole = std::floor(shift);
  double frac = shift - whole;
  if (frac < 1e-9) {
    frac = 0.0;
  } else if (frac > 1.0 - 1e-9) {
    whole += 1.0;
    frac = 0.0;
  }
  const auto d = static_cast<long>(whole);
  cvec out(count);
  for (std::size_t n = 0; n < count; ++n) {
    const long m = static_cast<long>(n) - d;
    // s(t_n - tau) sits between samples m - 1 and m when frac > 0.
    out[n] = frac == 0.0 ? at(m) : (1.0 - frac) * at(m) + frac * at(m - 1);
  }
  return out;
}

cvec apply_channel(const SampledWaveform& w, const ChannelScenario& scen, Rng& rng) {
  scen.validate();
  const double fs = w.sample_rate;
  const double T = w.samples_per_subpulse / fs;
  const std::size_t count =
      scen.window > 0.0 ? static_cast<std::size_t>(std::llround(scen.window * fs))
                        : w.samples.size() + static_cast<std::size_t>(std::ceil(std::max(scen.tau_true, 0.0) * fs));
  if (scen.tau_true < 0.0 || scen.tau_true * fs > static_cast<double>(count)) {
    throw ParameterError("target delay lies outside the observation window");
  }
  const std::complex<double> b = scen.fixed_gain ? *scen.fixed_gain : complex_gaussian(rng, scen.sigma_b_sq);
  const double noise_var = scen.n0(static_cast<long>(w.subpulses), T) * fs;

  cvec r = delayed_replica(w, scen.tau_true, count);
  for (std::size_t n = 0; n < count; ++n) {
    r[n] *= b * std::polar(1.0, scen.omega_true * static_cast<double>(n) / fs);
    if (noise_var > 0.0) r[n] += complex_gaussian(rng, noise_var);
  }
  return r;
}

std::vector<double> matched_filter_surface(std::span<const std::complex<double>> received,
                                           const SampledWaveform& w, const SearchGrid& grid) {
  grid.validate();
  if (received.empty()) throw ParameterError("empty received signal");
  const double fs = w.sample_rate;
  std::vector<double> out(grid.size());
  std::vector<std::complex<double>> acc(static_cast<std::size_t>(grid.n_omega));
  for (int i = 0; i < grid.n_tau; ++i) {
    const cvec rep = delayed_replica(w, grid.tau(i), received.size());
    std::fill(acc.begin(), acc.end(), std::complex<double>{});
    for (std::size_t n = 0; n < received.size(); ++n) {
      if (rep[n] == std::complex<double>{}) continue;
      const std::complex<double> p = received[n] * std::conj(rep[n]);
      const double tn = static_cast<double>(n) / fs;
      std::complex<double> ph = std::polar(1.0, -grid.omega_min * tn);
      const std::complex<double> step = std::polar(1.0, -grid.omega_step * tn);
      for (int j = 0; j < grid.n_omega; ++j) {
        acc[static_cast<std::size_t>(j)] += p * ph;
        ph *= step;
      }
    }
    for (int j = 0; j < grid.n_omega; ++j) out[grid.index(i, j)] = std::norm(acc[static_cast<std::size_t>(j)]);
  }
  return out;
}

EstimationResult ml_estimate(std::span<const std::complex<double>> received, const SampledWaveform& w,
                             const SearchGrid& grid) {
  const auto surface = matched_filter_surface(received, w, grid);
  EstimationResult best;
  best.peak_metric = -1.0;
  for (int i = 0; i < grid.n_tau; ++i) {
    for (int j = 0; j < grid.n_omega; ++j) {
      const double v = surface[grid.index(i, j)];
      if (v > best.peak_metric) best = {grid.tau(i), grid.omega(j), v, i, j};
    }
  }
  return best;
}

int detect_symbol(std::span<const std::complex<double>> subpulse, const WaveformParams& params) {
  if (static_cast<int>(subpulse.size()) != params.samples_per_subpulse) {
    throw ParameterError("detector window must hold exactly one subpulse");
  }
  int best = 0;
  double best_v = -1.0;
  for (int m = 0; m < params.M; ++m) {
    const auto t = tone(params, m);
    std::complex<double> acc{};
    for (std::size_t n = 0; n < subpulse.size(); ++n) acc += subpulse[n] * std::conj(t[n]);
    const double v = std::norm(acc);
    if (v > best_v) {
      best_v = v;
      best = m;
    }
  }
  return best;
}

Scheme Scheme::fixed(long L) {
  Scheme s;
  s.kind = Kind::fixed;
  s.L = L;
  s.name = "fixed" + std::to_string(L);
  s.validate();
  return s;
}

Scheme Scheme::dynamic(double gamma2, long accept_min, long accept_max, long cap) {
  Scheme s;
  s.kind = Kind::dynamic;
  s.stop = StoppingConfig::flatness_only(gamma2, cap);
  s.accept_min = accept_min;
  s.accept_max = accept_max;
  s.L = 0;
  const bool bounded = accept_min > 1 || accept_max != StoppingConfig::kUnbounded;
  s.name = bounded ? "bounded" : "dynamic";
  s.validate();
  return s;
}

void Scheme::validate() const {
  if (kind == Kind::fixed) {
    if (L < 1) throw ParameterError("fixed scheme needs L >= 1");
    return;
  }
  stop.validate();
  if (accept_min < 1 || accept_max < accept_min) throw ParameterError("invalid acceptance range");
}

Realization draw_realization(Rng& rng, const Scheme& scheme, int M, long max_attempts) {
  if (scheme.kind == Scheme::Kind::fixed) return {random_sequence(rng, M, scheme.L), 1};
  for (long attempt = 1; attempt <= max_attempts; ++attempt) {
    auto dw = generate_waveform(rng, M, scheme.stop);
    if (dw.decision.L >= scheme.accept_min && dw.decision.L <= scheme.accept_max) {
      return {std::move(dw.sequence), attempt};
    }
  }
  throw NumericalError("no dynamic realization fell inside the acceptance range");
}

SearchGrid SimSetup::grid() const { return SearchGrid::standard(params, tau_true, omega_true, grid_L_max); }

void SimSetup::validate() const {
  params.validate(true);
  if (!(sigma_b_sq > 0.0)) throw ParameterError("reflection variance must be positive");
  if (grid_L_max < 1) throw ParameterError("grid L_max must be >= 1");
}

RealizationMse evaluate_realization(Rng& rng, const SimSetup& setup, const FrequencySequence& seq,
                                    std::span<const double> snr_db, long trials) {
  if (trials < 1) throw ParameterError("trials must be >= 1");
  const SearchGrid grid = setup.grid();
  const std::size_t truth = grid.index(grid.n_tau / 2, grid.n_omega / 2);
  const MatchedFilterModel model(setup.params, seq, grid, truth);
  const double T = setup.params.T;
  const long L = static_cast<long>(seq.size());
  const double fs = model.sample_rate();

  std::vector<double> noise_var;
  for (double db : snr_db) {
    ChannelScenario sc;
    sc.sigma_b_sq = setup.sigma_b_sq;
    sc.snr = db_to_linear(db);
    noise_var.push_back(sc.n0(L, T) * fs);
  }

  RealizationMse out;
  out.L = L;
  out.rms_bw_sq = rms_bw_sq(seq, setup.params, default_limiting_bandwidth(setup.params));
  out.trials = trials;
  out.delay_mse.assign(snr_db.size(), 0.0);
  out.doppler_mse.assign(snr_db.size(), 0.0);

  const double tau0 = grid.tau(grid.n_tau / 2);
  const double omega0 = grid.omega(grid.n_omega / 2);
  cvec z;
  for (long t = 0; t < trials; ++t) {
    const std::complex<double> b = setup.fixed_gain ? *setup.fixed_gain : complex_gaussian(rng, setup.sigma_b_sq);
    model.draw_noise(rng, z);
    for (std::size_t s = 0; s < snr_db.size(); ++s) {
      const EstimationResult e = model.estimate(b, noise_var[s], z);
      const double dt = (e.tau_hat - tau0) / T;
      const double dw = (e.omega_hat - omega0) * T;
      out.delay_mse[s] += dt * dt;
      out.doppler_mse[s] += dw * dw;
    }
  }
  for (std::size_t s = 0; s < snr_db.size(); ++s) {
    out.delay_mse[s] /= static_cast<double>(trials);
    out.doppler_mse[s] /= static_cast<double>(trials);
  }
  return out;
}

std::vector<double> SchemeRun::mean_delay_mse() const {
  std::vector<double> m(snr_db.size(), 0.0);
  for (const auto& r : realizations)
    for (std::size_t s = 0; s < m.size(); ++s) m[s] += r.delay_mse[s];
  for (auto& v : m) v /= static_cast<double>(std::max<std::size_t>(realizations.size(), 1));
  return m;
}

std::vector<double> SchemeRun::mean_doppler_mse() const {
  std::vector<double> m(snr_db.size(), 0.0);
  for (const auto& r : realizations)
    for (std::size_t s = 0; s < m.size(); ++s) m[s] += r.doppler_mse[s];
  for (auto& v : m) v /= static_cast<double>(std::max<std::size_t>(realizations.size(), 1));
  return m;
}

std::vector<long> SchemeRun::lengths() const {
  std::vector<long> v;
  for (const auto& r : realizations) v.push_back(r.L);
  return v;
}

std::vector<double> SchemeRun::delay_column(std::size_t snr_index) const {
  std::vector<double> v;
  for (const auto& r : realizations) v.push_back(r.delay_mse.at(snr_index));
  return v;
}

std::vector<double> SchemeRun::doppler_column(std::size_t snr_index) const {
  std::vector<double> v;
  for (const auto& r : realizations) v.push_back(r.doppler_mse.at(snr_index));
  return v;
}

SchemeRun run_scheme(const Scheme& scheme, const SimSetup& setup, std::span<const double> snr_db,
                     long realizations, long trials, std::uint64_t seed, std::uint64_t stream) {
  scheme.validate();
  setup.validate();
  if (realizations < 1) throw ParameterError("realizations must be >= 1");
  SchemeRun run;
  run.scheme = scheme;
  run.snr_db.assign(snr_db.begin(), snr_db.end());
  for (long i = 0; i < realizations; ++i) {
    Rng rng = make_stream(seed, stream, static_cast<std::uint64_t>(i));
    Realization r = draw_realization(rng, scheme, setup.params.M);
    run.excluded += r.attempts - 1;
    run.realizations.push_back(evaluate_realization(rng, setup, r.sequence, snr_db, trials));
    run.sequences.push_back(std::move(r.sequence));
  }
  return run;
}

ExtremeCases evaluate_extremes(const SchemeRun& run, const SimSetup& setup, long trials, std::uint64_t seed,
                               std::uint64_t stream) {
  if (run.realizations.empty()) throw ParameterError("no realizations to rank");
  const auto& rs = run.realizations;
  auto pick = [&](auto key, bool largest) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < rs.size(); ++i) {
      if (largest ? key(rs[i]) > key(rs[best]) : key(rs[i]) < key(rs[best])) best = i;
    }
    return best;
  };
  auto bw = [](const RealizationMse& r) { return r.rms_bw_sq; };
  auto len = [](const RealizationMse& r) { return static_cast<double>(r.L); };

  ExtremeCases x;
  x.delay_best_index = pick(bw, true);
  x.delay_worst_index = pick(bw, false);
  x.doppler_best_index = pick(len, true);
  x.doppler_worst_index = pick(len, false);

  auto redo = [&](std::size_t idx, std::uint64_t tag) {
    Rng rng = make_stream(seed, stream, (std::uint64_t{1} << 40) + 4 * idx + tag);
    return evaluate_realization(rng, setup, run.sequences.at(idx), run.snr_db, trials);
  };
  x.delay_best = redo(x.delay_best_index, 0);
  x.delay_worst = redo(x.delay_worst_index, 1);
  x.doppler_best = redo(x.doppler_best_index, 2);
  x.doppler_worst = redo(x.doppler_worst_index, 3);
  return x;
}

}  // namespace fskjcr
