#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fskjcr/config.hpp"
#include "fskjcr/result_table.hpp"

namespace fskjcr {

struct RunOptions {
  std::uint64_t seed = 1;
  bool paper_scale = false;  ///< multiplies Monte Carlo counts by 10
};

struct ExperimentResult {
  std::string name;
  std::vector<ResultTable> tables;
  std::vector<std::pair<std::string, double>> summary;

  const ResultTable& table(const std::string& panel) const;
  double value(const std::string& key) const;
};

/// af-vs-l: grid-point sidelobe A(1,0) of growing prefixes plus its moments.
ExperimentResult run_af_vs_L(const Config& cfg, const RunOptions& opt);
/// flatness-stats: empirical and analytic mean/std of U(L), and the L band
/// where the mean +- 2 std crosses each gamma2.
ExperimentResult run_flatness_stats(const Config& cfg, const RunOptions& opt);
/// hitcdf: empirical, Brownian and tangent CDFs of the hitting time.
ExperimentResult run_hitcdf(const Config& cfg, const RunOptions& opt);
/// af-pmf: histogram of A(k,r) over dynamic realizations.
ExperimentResult run_af_pmf(const Config& cfg, const RunOptions& opt);
/// mse-vs-snr: average and best/worst delay and Doppler MSE per SNR.
ExperimentResult run_mse_vs_snr(const Config& cfg, const RunOptions& opt);
/// cdf-at-snr: per-realization MSE and latency CDFs at one SNR and the
/// fixed-scheme CDF values at the dynamic delay-MSE quantiles.
ExperimentResult run_cdf_at_snr(const Config& cfg, const RunOptions& opt);
/// gamma2-solve: gamma2 meeting F(L1) = 1 - alpha, checked by simulation.
ExperimentResult run_gamma2_solve(const Config& cfg, const RunOptions& opt);

std::vector<std::string> experiment_names();
/// Dispatches on the CLI name; throws ConfigError for an unknown name.
ExperimentResult run_experiment(const std::string& name, const Config& cfg, const RunOptions& opt);

std::string library_version();

}  // namespace fskjcr
