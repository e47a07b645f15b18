#include "fskjcr/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string_view>

#include "fskjcr/ambiguity.hpp"
#include "fskjcr/error.hpp"
#include "fskjcr/hitting.hpp"
#include "fskjcr/jcr_sim.hpp"
#include "fskjcr/stats.hpp"
#include "fskjcr/stopper.hpp"

#ifndef FSKJCR_VERSION
#define FSKJCR_VERSION "0.0.0"
#endif

namespace fskjcr {

namespace {

constexpr long kScale = 10;

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
  return buf;
}

long scaled(long n, const RunOptions& opt) { return opt.paper_scale ? n * kScale : n; }

long positive(const Config& cfg, const std::string& key, long fallback) {
  const long v = cfg.get_long(key, fallback);
  if (v < 1) throw ConfigError("key '" + key + "' must be >= 1");
  return v;
}

int alphabet(const Config& cfg) {
  const long M = cfg.get_long("M", 32);
  if (M < 2 || M > 4096) throw ConfigError("key 'M' must lie in [2, 4096]");
  return static_cast<int>(M);
}

double positive_double(const Config& cfg, const std::string& key, double fallback) {
  const double v = cfg.get_double(key, fallback);
  if (!(v > 0.0)) throw ConfigError("key '" + key + "' must be positive");
  return v;
}

std::vector<double> gamma2_list(const Config& cfg, const std::vector<double>& fallback) {
  auto v = cfg.get_doubles("gamma2_list", fallback);
  for (double g : v)
    if (!(g > 0.0)) throw ConfigError("gamma2 values must be positive");
  return v;
}

void check_keys(const Config& cfg, std::initializer_list<std::string_view> keys) {
  std::vector<std::string_view> allowed(keys);
  allowed.push_back("seed");
  allowed.push_back("experiment");
  cfg.require_known(allowed);
}

// Stamps every table with the provenance header.
void stamp(ExperimentResult& res, const Config& cfg, const RunOptions& opt) {
  for (auto& t : res.tables) {
    t.add_meta("experiment", res.name);
    t.add_meta("config_hash", hex64(cfg.hash()));
    t.add_meta("seed", std::to_string(opt.seed));
    t.add_meta("paper_scale", opt.paper_scale ? "1" : "0");
    t.add_meta("version", library_version());
  }
}

double sup_gap(const std::vector<double>& a, const std::vector<double>& b, std::size_t from) {
  double g = 0.0;
  for (std::size_t i = from; i < a.size() && i < b.size(); ++i) g = std::max(g, std::abs(a[i] - b[i]));
  return g;
}

WaveformParams waveform_params(const Config& cfg, int M) {
  const double T = positive_double(cfg, "T", 1.0);
  const double df = positive_double(cfg, "delta_f", 1.0 / T);
  const long spp = cfg.get_long("samples_per_subpulse", 0);
  try {
    return WaveformParams::make(M, T, df, 0.0, static_cast<int>(spp));
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
}

SimSetup sim_setup(const Config& cfg, int M) {
  SimSetup s;
  s.params = waveform_params(cfg, M);
  s.sigma_b_sq = positive_double(cfg, "sigma_b_sq", 1.0);
  s.tau_true = cfg.get_double("tau_true", 2.0 * s.params.T);
  s.omega_true = cfg.get_double("omega_true", 0.0);
  s.grid_L_max = positive(cfg, "grid_L_max", 400);
  return s;
}

}  // namespace

std::string library_version() { return std::string("fskjcr ") + FSKJCR_VERSION; }

const ResultTable& ExperimentResult::table(const std::string& panel) const {
  for (const auto& t : tables)
    if (t.panel() == panel) return t;
  throw ParameterError("experiment " + name + " has no panel '" + panel + "'");
}

double ExperimentResult::value(const std::string& key) const {
  for (const auto& [k, v] : summary)
    if (k == key) return v;
  throw ParameterError("experiment " + name + " has no summary value '" + key + "'");
}

ExperimentResult run_af_vs_L(const Config& cfg, const RunOptions& opt) {
  check_keys(cfg, {"M", "L_max", "curves", "realizations"});
  const int M = alphabet(cfg);
  const long L_max = positive(cfg, "L_max", 1000);
  const long curves = cfg.get_long("curves", 10);
  const long runs = scaled(positive(cfg, "realizations", 1000), opt);
  if (curves < 0 || curves > runs) throw ConfigError("key 'curves' must lie in [0, realizations]");
  if (L_max < 2) throw ConfigError("key 'L_max' must be >= 2");

  // Running count of l with m_{l-1} = m_l gives A(1,0) for every prefix in one pass.
  std::vector<RunningStats> stats(static_cast<std::size_t>(L_max + 1));
  std::vector<std::vector<double>> curve(static_cast<std::size_t>(curves),
                                         std::vector<double>(static_cast<std::size_t>(L_max + 1), 0.0));
  for (long i = 0; i < runs; ++i) {
    Rng rng = make_stream(opt.seed, 0, static_cast<std::uint64_t>(i));
    const auto seq = random_sequence(rng, M, L_max);
    long c = 0;
    for (long L = 2; L <= L_max; ++L) {
      if (seq[static_cast<std::size_t>(L - 2)] == seq[static_cast<std::size_t>(L - 1)]) ++c;
      const double a = static_cast<double>(c) / static_cast<double>(L);
      stats[static_cast<std::size_t>(L)].push(a);
      if (i < curves) curve[static_cast<std::size_t>(i)][static_cast<std::size_t>(L)] = a;
    }
  }

  ExperimentResult res{"af-vs-l", {}, {}};
  std::vector<std::string> cc{"L"};
  for (long i = 0; i < curves; ++i) cc.push_back("a10_" + std::to_string(i));
  ResultTable tc("af-vs-l", "curves", cc);
  ResultTable ts("af-vs-l", "stats", {"L", "analytic_mean", "analytic_var", "sample_mean", "sample_var"});
  for (long L = 2; L <= L_max; ++L) {
    std::vector<double> row{static_cast<double>(L)};
    for (long i = 0; i < curves; ++i) row.push_back(curve[static_cast<std::size_t>(i)][static_cast<std::size_t>(L)]);
    tc.add_row(std::move(row));
    const auto s = af_stats(L, M, {1, 0});
    const auto& st = stats[static_cast<std::size_t>(L)];
    ts.add_row({static_cast<double>(L), s.mean, s.variance, st.mean(), st.variance()});
  }
  res.tables.push_back(std::move(tc));
  res.tables.push_back(std::move(ts));
  res.summary = {{"realizations", static_cast<double>(runs)},
                 {"sample_var_L10", stats[std::min<std::size_t>(10, static_cast<std::size_t>(L_max))].variance()},
                 {"sample_var_Lmax", stats[static_cast<std::size_t>(L_max)].variance()}};
  stamp(res, cfg, opt);
  return res;
}

ExperimentResult run_flatness_stats(const Config& cfg, const RunOptions& opt) {
  check_keys(cfg, {"M", "L_max", "runs", "gamma2_list"});
  const int M = alphabet(cfg);
  const long L_max = positive(cfg, "L_max", 1000);
  const long runs = scaled(positive(cfg, "runs", 2000), opt);
  const auto g2 = gamma2_list(cfg, {5e-5, 1e-4});

  std::vector<RunningStats> u(static_cast<std::size_t>(L_max + 1));
  std::uniform_int_distribution<int> tone(0, M - 1);
  for (long i = 0; i < runs; ++i) {
    Rng rng = make_stream(opt.seed, 0, static_cast<std::uint64_t>(i));
    SpectrumState st(M);
    for (long L = 1; L <= L_max; ++L) {
      st.push(tone(rng));
      u[static_cast<std::size_t>(L)].push(flatness(st));
    }
  }

  const double m2 = static_cast<double>(M) * M;
  auto mean_u = [&](double L) { return (M - 1.0) / (L * m2); };
  auto std_u = [&](double L) { return std::sqrt(2.0 * (M - 1.0) * (1.0 - 1.0 / L)) / (L * m2); };

  ExperimentResult res{"flatness-stats", {}, {}};
  ResultTable ts("flatness-stats", "stats",
                 {"L", "empirical_mean", "empirical_std", "analytic_mean", "analytic_std", "lower_2std", "upper_2std"});
  for (long L = 1; L <= L_max; ++L) {
    const double l = static_cast<double>(L);
    const auto& s = u[static_cast<std::size_t>(L)];
    ts.add_row({l, s.mean(), std::sqrt(s.variance()), mean_u(l), std_u(l), mean_u(l) - 2.0 * std_u(l),
                mean_u(l) + 2.0 * std_u(l)});
  }
  ResultTable tb("flatness-stats", "band", {"gamma2", "L_lower", "L_mean", "L_upper"});
  for (double g : g2) {
    // First integer L at which each analytic curve reaches gamma2.
    auto first_below = [&](auto f) {
      for (long L = 1; L < 100000000; ++L)
        if (f(static_cast<double>(L)) <= g) return L;
      throw NumericalError("flatness band does not cross gamma2");
    };
    const long lo = first_below([&](double L) { return mean_u(L) - 2.0 * std_u(L); });
    const long mid = first_below(mean_u);
    const long hi = first_below([&](double L) { return mean_u(L) + 2.0 * std_u(L); });
    tb.add_row({g, static_cast<double>(lo), static_cast<double>(mid), static_cast<double>(hi)});
    res.summary.emplace_back("L_lower_" + format_number(g), static_cast<double>(lo));
    res.summary.emplace_back("L_upper_" + format_number(g), static_cast<double>(hi));
  }
  res.tables.push_back(std::move(ts));
  res.tables.push_back(std::move(tb));
  res.summary.emplace_back("runs", static_cast<double>(runs));
  stamp(res, cfg, opt);
  return res;
}

ExperimentResult run_hitcdf(const Config& cfg, const RunOptions& opt) {
  check_keys(cfg, {"M", "gamma2_list", "runs", "t_max", "L_plot_max", "sup_from"});
  const int M = alphabet(cfg);
  const auto g2 = gamma2_list(cfg, {5e-5, 1e-4});
  const long runs = scaled(positive(cfg, "runs", 10000), opt);
  const long t_max = positive(cfg, "t_max", 20000);
  const long L_plot = positive(cfg, "L_plot_max", 1500);
  const long sup_from = positive(cfg, "sup_from", 200);
  if (t_max < 2) throw ConfigError("key 't_max' must be >= 2");

  ExperimentResult res{"hitcdf", {}, {}};
  ResultTable tc("hitcdf", "cdf", {"gamma2", "L", "empirical", "brownian", "tangent"});
  ResultTable tsum("hitcdf", "summary",
                   {"gamma2", "runs", "empirical_mean", "brownian_mean", "p_below_200", "p_150_450",
                    "sup_empirical_tangent", "sup_brownian_tangent", "sup_empirical_brownian", "tangent_mass",
                    "forced_empirical", "forced_brownian"});
  for (std::size_t gi = 0; gi < g2.size(); ++gi) {
    const HittingModel model(M, g2[gi]);
    Rng r_emp = make_stream(opt.seed, 2 * gi, 0);
    Rng r_bm = make_stream(opt.seed, 2 * gi + 1, 0);
    const auto emp = empirical_hitting_samples(r_emp, model, runs, t_max);
    const auto bm = brownian_hitting_samples(r_bm, model, runs, t_max);
    const auto F_emp = hitting_cdf(emp);
    const auto F_bm = hitting_cdf(bm);

    long L_hi = L_plot;
    L_hi = std::max(L_hi, static_cast<long>(F_emp.sorted().back()));
    L_hi = std::max(L_hi, static_cast<long>(F_bm.sorted().back()));
    std::vector<double> ts;
    for (long L = 2; L <= L_hi; ++L) ts.push_back(static_cast<double>(L));
    const auto tan_tail = tangent_cdf_table(ts, model);

    // Index = L.
    std::vector<double> fe(static_cast<std::size_t>(L_hi + 1)), fb(fe.size()), ft(fe.size(), 0.0);
    for (long L = 1; L <= L_hi; ++L) {
      fe[static_cast<std::size_t>(L)] = F_emp(static_cast<double>(L));
      fb[static_cast<std::size_t>(L)] = F_bm(static_cast<double>(L));
      if (L >= 2) ft[static_cast<std::size_t>(L)] = tan_tail[static_cast<std::size_t>(L - 2)];
    }
    for (long L = 1; L <= L_plot; ++L) {
      const auto i = static_cast<std::size_t>(L);
      tc.add_row({g2[gi], static_cast<double>(L), fe[i], fb[i], ft[i]});
    }
    const auto from = static_cast<std::size_t>(sup_from);
    const double s_et = sup_gap(fe, ft, from);
    const double s_bt = sup_gap(fb, ft, from);
    const double s_eb = sup_gap(fe, fb, from);
    const double mass = tangent_mass(model);
    const double p200 = F_emp.below(200.0);
    const double p150_450 = F_emp(450.0) - F_emp.below(150.0);
    long forced_e = 0, forced_b = 0;
    for (const auto& s : emp) forced_e += s.forced;
    for (const auto& s : bm) forced_b += s.forced;
    tsum.add_row({g2[gi], static_cast<double>(runs), F_emp.mean(), F_bm.mean(), p200, p150_450, s_et, s_bt, s_eb, mass,
                  static_cast<double>(forced_e), static_cast<double>(forced_b)});
    const std::string tag = "_" + format_number(g2[gi]);
    res.summary.emplace_back("empirical_mean" + tag, F_emp.mean());
    res.summary.emplace_back("brownian_mean" + tag, F_bm.mean());
    res.summary.emplace_back("p_below_200" + tag, p200);
    res.summary.emplace_back("p_150_450" + tag, p150_450);
    res.summary.emplace_back("sup_empirical_tangent" + tag, s_et);
    res.summary.emplace_back("sup_brownian_tangent" + tag, s_bt);
    res.summary.emplace_back("sup_empirical_brownian" + tag, s_eb);
    res.summary.emplace_back("tangent_mass" + tag, mass);
  }
  res.tables.push_back(std::move(tc));
  res.tables.push_back(std::move(tsum));
  stamp(res, cfg, opt);
  return res;
}

ExperimentResult run_af_pmf(const Config& cfg, const RunOptions& opt) {
  check_keys(cfg, {"M", "gamma2", "realizations", "k", "r", "bins", "lo", "hi", "L_ref", "cap"});
  const int M = alphabet(cfg);
  const double gamma2 = positive_double(cfg, "gamma2", 1e-4);
  const long runs = scaled(positive(cfg, "realizations", 1000), opt);
  const GridPoint p{static_cast<int>(cfg.get_long("k", 1)), static_cast<int>(cfg.get_long("r", 0))};
  const long bins = positive(cfg, "bins", 40);
  const double lo = cfg.get_double("lo", 0.0);
  const double hi = cfg.get_double("hi", 0.08);
  const long L_ref = positive(cfg, "L_ref", 150);
  const long cap = positive(cfg, "cap", 100000);
  if (!(hi > lo)) throw ConfigError("histogram range needs hi > lo");

  const StoppingConfig stop = StoppingConfig::flatness_only(gamma2, cap);
  std::vector<FrequencySequence> seqs;
  seqs.reserve(static_cast<std::size_t>(runs));
  RunningStats lengths;
  for (long i = 0; i < runs; ++i) {
    Rng rng = make_stream(opt.seed, 0, static_cast<std::uint64_t>(i));
    auto dw = generate_waveform(rng, M, stop);
    if (!in_domain(p, static_cast<long>(dw.sequence.size()), M)) {
      throw ConfigError("grid point outside the domain of a realization");
    }
    lengths.push(static_cast<double>(dw.decision.L));
    seqs.push_back(std::move(dw.sequence));
  }
  const Histogram h = empirical_pmf(seqs, p, lo, hi, static_cast<int>(bins));

  ExperimentResult res{"af-pmf", {}, {}};
  ResultTable tp("af-pmf", "pmf", {"bin_lo", "bin_hi", "mass"});
  for (std::size_t b = 0; b < h.mass.size(); ++b) tp.add_row({h.edges[b], h.edges[b + 1], h.mass[b]});
  const double ref_var = af_stats(L_ref, M, p).variance;
  ResultTable ts("af-pmf", "summary",
                 {"realizations", "sample_mean", "sample_var", "inv_M", "analytic_var_at_L_ref", "L_ref", "mean_L",
                  "out_of_range"});
  ts.add_row({static_cast<double>(runs), h.sample_mean, h.sample_variance, 1.0 / M, ref_var,
              static_cast<double>(L_ref), lengths.mean(), static_cast<double>(h.out_of_range)});
  res.tables.push_back(std::move(tp));
  res.tables.push_back(std::move(ts));
  res.summary = {{"sample_mean", h.sample_mean},
                 {"sample_var", h.sample_variance},
                 {"inv_M", 1.0 / M},
                 {"analytic_var_at_L_ref", ref_var},
                 {"mean_L", lengths.mean()}};
  stamp(res, cfg, opt);
  return res;
}

namespace {

struct MseKeys {
  int M;
  SimSetup setup;
  double gamma2;
  long bound_min, bound_max, cap, realizations, trials, extreme_factor;
};

MseKeys mse_keys(const Config& cfg, const RunOptions& opt, long default_realizations, long default_trials) {
  MseKeys k;
  k.M = alphabet(cfg);
  k.setup = sim_setup(cfg, k.M);
  k.gamma2 = positive_double(cfg, "gamma2", 1e-4);
  k.bound_min = positive(cfg, "bound_min", 200);
  k.bound_max = positive(cfg, "bound_max", 400);
  if (k.bound_max < k.bound_min) throw ConfigError("bound_max must be >= bound_min");
  k.cap = positive(cfg, "cap", 100000);
  k.realizations = scaled(positive(cfg, "realizations", default_realizations), opt);
  k.trials = positive(cfg, "trials", default_trials);
  k.extreme_factor = positive(cfg, "extreme_factor", 10);
  return k;
}

}  // namespace

ExperimentResult run_mse_vs_snr(const Config& cfg, const RunOptions& opt) {
  check_keys(cfg, {"M", "T", "delta_f", "samples_per_subpulse", "sigma_b_sq", "tau_true", "omega_true",
                   "grid_L_max", "gamma2", "bound_min", "bound_max", "cap", "realizations", "trials",
                   "extreme_factor", "snr_db", "fixed_L"});
  const MseKeys k = mse_keys(cfg, opt, 200, 50);
  const auto snr = cfg.get_doubles("snr_db", {0, 5, 10, 15, 20});
  const long fixed_L = positive(cfg, "fixed_L", 300);

  const std::vector<Scheme> schemes{Scheme::fixed(fixed_L), Scheme::dynamic(k.gamma2, 1, StoppingConfig::kUnbounded, k.cap),
                                    Scheme::dynamic(k.gamma2, k.bound_min, k.bound_max, k.cap)};
  std::vector<SchemeRun> runs;
  std::vector<ExtremeCases> ext;
  for (std::size_t s = 0; s < schemes.size(); ++s) {
    runs.push_back(run_scheme(schemes[s], k.setup, snr, k.realizations, k.trials, opt.seed, s));
    ext.push_back(evaluate_extremes(runs.back(), k.setup, k.trials * k.extreme_factor, opt.seed, s));
  }

  ExperimentResult res{"mse-vs-snr", {}, {}};
  ResultTable ta("mse-vs-snr", "average",
                 {"snr_db", "fixed_delay", "dynamic_delay", "bounded_delay", "fixed_doppler", "dynamic_doppler",
                  "bounded_doppler"});
  std::vector<std::vector<double>> dm, fm;
  for (const auto& r : runs) {
    dm.push_back(r.mean_delay_mse());
    fm.push_back(r.mean_doppler_mse());
  }
  for (std::size_t i = 0; i < snr.size(); ++i)
    ta.add_row({snr[i], dm[0][i], dm[1][i], dm[2][i], fm[0][i], fm[1][i], fm[2][i]});

  std::vector<std::string> ec{"snr_db"};
  for (const auto& s : schemes) {
    for (const char* q : {"delay_best", "delay_worst", "doppler_best", "doppler_worst"})
      ec.push_back(s.name + "_" + q);
  }
  ResultTable te("mse-vs-snr", "extremes", ec);
  for (std::size_t i = 0; i < snr.size(); ++i) {
    std::vector<double> row{snr[i]};
    for (const auto& x : ext) {
      row.push_back(x.delay_best.delay_mse[i]);
      row.push_back(x.delay_worst.delay_mse[i]);
      row.push_back(x.doppler_best.doppler_mse[i]);
      row.push_back(x.doppler_worst.doppler_mse[i]);
    }
    te.add_row(std::move(row));
  }

  ResultTable tr("mse-vs-snr", "realizations",
                 {"scheme", "realization", "L", "rms_bw_sq", "snr_db", "delay_mse", "doppler_mse"});
  for (std::size_t s = 0; s < runs.size(); ++s) {
    for (std::size_t j = 0; j < runs[s].realizations.size(); ++j) {
      const auto& r = runs[s].realizations[j];
      for (std::size_t i = 0; i < snr.size(); ++i)
        tr.add_row({static_cast<double>(s), static_cast<double>(j), static_cast<double>(r.L), r.rms_bw_sq, snr[i],
                    r.delay_mse[i], r.doppler_mse[i]});
    }
  }
  res.tables.push_back(std::move(ta));
  res.tables.push_back(std::move(te));
  res.tables.push_back(std::move(tr));

  const std::size_t last = snr.size() - 1;
  for (std::size_t s = 0; s < runs.size(); ++s) {
    const std::string& n = schemes[s].name;
    res.summary.emplace_back(n + "_delay_mse_last", dm[s][last]);
    res.summary.emplace_back(n + "_doppler_mse_last", fm[s][last]);
    res.summary.emplace_back(n + "_delay_spread_last",
                             std::abs(ext[s].delay_worst.delay_mse[last] - ext[s].delay_best.delay_mse[last]));
    res.summary.emplace_back(n + "_excluded", static_cast<double>(runs[s].excluded));
  }
  res.summary.emplace_back("snr_db_last", snr[last]);
  stamp(res, cfg, opt);
  return res;
}

ExperimentResult run_cdf_at_snr(const Config& cfg, const RunOptions& opt) {
  check_keys(cfg, {"M", "T", "delta_f", "samples_per_subpulse", "sigma_b_sq", "tau_true", "omega_true",
                   "grid_L_max", "gamma2", "bound_min", "bound_max", "cap", "realizations", "trials",
                   "extreme_factor", "snr_db", "fixed_L_list", "quantiles"});
  const MseKeys k = mse_keys(cfg, opt, 1000, 100);
  const double snr = cfg.get_double("snr_db", 20.0);
  const auto fixed_L = cfg.get_longs("fixed_L_list", {200, 300, 400});
  const auto quantiles = cfg.get_doubles("quantiles", {0.90, 0.95, 0.99});
  for (double q : quantiles)
    if (!(q > 0.0 && q <= 1.0)) throw ConfigError("quantiles must lie in (0, 1]");
  for (long L : fixed_L)
    if (L < 1) throw ConfigError("fixed_L_list entries must be >= 1");

  std::vector<Scheme> schemes{Scheme::dynamic(k.gamma2, k.bound_min, k.bound_max, k.cap)};
  for (long L : fixed_L) schemes.push_back(Scheme::fixed(L));
  const std::vector<double> snrs{snr};
  std::vector<SchemeRun> runs;
  for (std::size_t s = 0; s < schemes.size(); ++s)
    runs.push_back(run_scheme(schemes[s], k.setup, snrs, k.realizations, k.trials, opt.seed, s));

  ExperimentResult res{"cdf-at-snr", {}, {}};
  std::vector<std::string> cols{"cdf"};
  for (const auto& s : schemes) cols.push_back(s.name);

  auto quantile_table = [&](const std::string& panel, auto column_of) {
    ResultTable t("cdf-at-snr", panel, cols);
    std::vector<std::vector<double>> sorted;
    for (const auto& r : runs) {
      auto v = column_of(r);
      std::sort(v.begin(), v.end());
      sorted.push_back(std::move(v));
    }
    const std::size_t n = sorted.front().size();
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> row{static_cast<double>(i + 1) / static_cast<double>(n)};
      for (const auto& v : sorted) row.push_back(v[i]);
      t.add_row(std::move(row));
    }
    return t;
  };
  res.tables.push_back(quantile_table("delay_cdf", [](const SchemeRun& r) { return r.delay_column(0); }));
  res.tables.push_back(quantile_table("doppler_cdf", [](const SchemeRun& r) { return r.doppler_column(0); }));
  res.tables.push_back(quantile_table("latency_cdf", [](const SchemeRun& r) {
    std::vector<double> v;
    for (long L : r.lengths()) v.push_back(static_cast<double>(L));
    return v;
  }));

  std::vector<std::string> tcols{"quantile", "dynamic_delay_mse"};
  for (long L : fixed_L) tcols.push_back("fixed" + std::to_string(L) + "_pct");
  ResultTable t1("cdf-at-snr", "quantiles", tcols);
  const EmpiricalCdf dyn(runs[0].delay_column(0));
  std::vector<EmpiricalCdf> fixed;
  for (std::size_t s = 1; s < runs.size(); ++s) fixed.emplace_back(runs[s].delay_column(0));
  for (double q : quantiles) {
    const double x = dyn.quantile(q);
    std::vector<double> row{q, x};
    for (std::size_t f = 0; f < fixed.size(); ++f) {
      const double pct = 100.0 * fixed[f](x);
      row.push_back(pct);
      res.summary.emplace_back("quantile_cdf_L" + std::to_string(fixed_L[f]) + "_q" + format_number(q), pct);
    }
    t1.add_row(std::move(row));
  }
  res.tables.push_back(std::move(t1));

  // Doppler envelope: fixed schemes at the bounds.
  auto minmax = [](const std::vector<double>& v) { return std::minmax_element(v.begin(), v.end()); };
  const auto dyn_dop = runs[0].doppler_column(0);
  const auto [dmin, dmax] = minmax(dyn_dop);
  res.summary.emplace_back("bounded_doppler_min", *dmin);
  res.summary.emplace_back("bounded_doppler_max", *dmax);
  for (std::size_t s = 1; s < runs.size(); ++s) {
    const auto col = runs[s].doppler_column(0);
    const auto [mn, mx] = minmax(col);
    res.summary.emplace_back(schemes[s].name + "_doppler_min", *mn);
    res.summary.emplace_back(schemes[s].name + "_doppler_max", *mx);
    res.summary.emplace_back(schemes[s].name + "_doppler_mean",
                             std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(col.size()));
  }
  const auto lens = runs[0].lengths();
  res.summary.emplace_back("bounded_L_min", static_cast<double>(*std::min_element(lens.begin(), lens.end())));
  res.summary.emplace_back("bounded_L_max", static_cast<double>(*std::max_element(lens.begin(), lens.end())));
  res.summary.emplace_back("bounded_excluded", static_cast<double>(runs[0].excluded));
  stamp(res, cfg, opt);
  return res;
}

ExperimentResult run_gamma2_solve(const Config& cfg, const RunOptions& opt) {
  check_keys(cfg, {"M", "L1_list", "alpha_list", "verify_runs", "t_max", "scan_points"});
  const int M = alphabet(cfg);
  const auto L1s = cfg.get_longs("L1_list", {450});
  const auto alphas = cfg.get_doubles("alpha_list", {0.1});
  const long runs = scaled(positive(cfg, "verify_runs", 10000), opt);
  const long t_max = positive(cfg, "t_max", 20000);
  const long scan = positive(cfg, "scan_points", 40);

  ExperimentResult res{"gamma2-solve", {}, {}};
  ResultTable ts("gamma2-solve", "solution",
                 {"L1", "alpha", "gamma2", "tangent_cdf_at_L1", "empirical_cdf_at_L1", "brownian_cdf_at_L1", "runs"});
  ResultTable tscan("gamma2-solve", "scan", {"L1", "gamma2", "tangent_cdf_at_L1"});
  std::uint64_t stream = 0;
  for (long L1 : L1s) {
    if (L1 < 2) throw ConfigError("L1 values must exceed 1");
    const double g_hi = (M - 1.0) / (static_cast<double>(M) * M);
    for (long i = 0; i < scan; ++i) {
      const double g = std::exp(std::log(1e-6) + (std::log(g_hi) - std::log(1e-6)) * static_cast<double>(i) /
                                                      static_cast<double>(std::max(scan - 1, 1L)));
      tscan.add_row({static_cast<double>(L1), g, tangent_cdf(static_cast<double>(L1), HittingModel(M, g))});
    }
    for (double alpha : alphas) {
      if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha values must lie in (0, 1)");
      const auto sol = gamma2_for_quantile(L1, alpha, M);
      const HittingModel model(M, sol.gamma2);
      Rng r1 = make_stream(opt.seed, stream++, 0);
      Rng r2 = make_stream(opt.seed, stream++, 0);
      const auto emp = hitting_cdf(empirical_hitting_samples(r1, model, runs, t_max));
      const auto bm = hitting_cdf(brownian_hitting_samples(r2, model, runs, t_max));
      const double l1 = static_cast<double>(L1);
      ts.add_row({l1, alpha, sol.gamma2, sol.achieved, emp(l1), bm(l1), static_cast<double>(runs)});
      const std::string tag = "_L" + std::to_string(L1) + "_a" + format_number(alpha);
      res.summary.emplace_back("gamma2" + tag, sol.gamma2);
      res.summary.emplace_back("empirical_cdf" + tag, emp(l1));
    }
  }
  res.tables.push_back(std::move(ts));
  res.tables.push_back(std::move(tscan));
  stamp(res, cfg, opt);
  return res;
}

std::vector<std::string> experiment_names() {
  return {"af-vs-l", "flatness-stats", "hitcdf", "af-pmf", "mse-vs-snr", "cdf-at-snr", "gamma2-solve"};
}

ExperimentResult run_experiment(const std::string& name, const Config& cfg, const RunOptions& opt) {
  if (name == "af-vs-l") return run_af_vs_L(cfg, opt);
  if (name == "flatness-stats") return run_flatness_stats(cfg, opt);
  if (name == "hitcdf") return run_hitcdf(cfg, opt);
  if (name == "af-pmf") return run_af_pmf(cfg, opt);
  if (name == "mse-vs-snr") return run_mse_vs_snr(cfg, opt);
  if (name == "cdf-at-snr") return run_cdf_at_snr(cfg, opt);
  if (name == "gamma2-solve") return run_gamma2_solve(cfg, opt);
  throw ConfigError("unknown experiment '" + name + "'");
}

}  // namespace fskjcr
