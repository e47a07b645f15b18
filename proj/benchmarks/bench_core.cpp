#include <benchmark/benchmark.h>

#include "fskjcr/ambiguity.hpp"
#include "fskjcr/hitting.hpp"
#include "fskjcr/jcr_sim.hpp"
#include "fskjcr/stopper.hpp"

using namespace fskjcr;

static void BM_StopperUpdate(benchmark::State& state) {
  Rng rng = make_stream(1);
  std::uniform_int_distribution<int> tone(0, 31);
  SpectrumState s(32);
  const auto cfg = StoppingConfig::flatness_only(1e-4);
  for (auto _ : state) {
    s.push(tone(rng));
    benchmark::DoNotOptimize(decide(s, cfg));
  }
}
BENCHMARK(BM_StopperUpdate);

static void BM_DynamicWaveform(benchmark::State& state) {
  Rng rng = make_stream(2);
  const auto cfg = StoppingConfig::flatness_only(1e-4);
  for (auto _ : state) benchmark::DoNotOptimize(generate_waveform(rng, 32, cfg).decision.L);
}
BENCHMARK(BM_DynamicWaveform);

static void BM_AfSidelobe(benchmark::State& state) {
  Rng rng = make_stream(3);
  const auto seq = random_sequence(rng, 32, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(af_sidelobe(seq, {1, 0}));
}
BENCHMARK(BM_AfSidelobe)->Arg(300)->Arg(1000);

static void BM_TangentCdf(benchmark::State& state) {
  const HittingModel m(32, 1e-4);
  for (auto _ : state) benchmark::DoNotOptimize(tangent_cdf(450.0, m));
}
BENCHMARK(BM_TangentCdf);

static void BM_MatchedFilterModelBuild(benchmark::State& state) {
  Rng rng = make_stream(4);
  SimSetup setup;
  const auto g = setup.grid();
  const auto seq = random_sequence(rng, 32, state.range(0));
  for (auto _ : state) {
    MatchedFilterModel model(setup.params, seq, g, g.index(g.n_tau / 2, g.n_omega / 2));
    benchmark::DoNotOptimize(model.energy());
  }
  state.SetLabel("561-point grid");
}
BENCHMARK(BM_MatchedFilterModelBuild)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_MatchedFilterTrial(benchmark::State& state) {
  Rng rng = make_stream(5);
  SimSetup setup;
  const auto g = setup.grid();
  const auto seq = random_sequence(rng, 32, 300);
  const MatchedFilterModel model(setup.params, seq, g, g.index(g.n_tau / 2, g.n_omega / 2));
  cvec z;
  for (auto _ : state) {
    model.draw_noise(rng, z);
    benchmark::DoNotOptimize(model.estimate({1.0, 0.0}, 30.0, z));
  }
}
BENCHMARK(BM_MatchedFilterTrial)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
