#include <benchmark/benchmark.h>
#include <bellsim/chsh.hpp>
#include <bellsim/closed_form.hpp>
#include <bellsim/detector_model.hpp>
#include <bellsim/fock_engine.hpp>
#include <bellsim/tomography.hpp>

namespace {

using namespace bellsim;

// Argument is tanh_chi in hundredths.
double tanh_chi_of(const benchmark::State& state) { return state.range(0) / 100.0; }

void BM_JointPhotonDistribution(benchmark::State& state) {
  const PdcSource source(tanh_chi_of(state));
  for (auto _ : state) {
    benchmark::DoNotOptimize(joint_photon_distribution(source, {0.3, 0.0}, {0.7, 0.0}));
  }
  state.counters["max_pairs"] = source.max_pairs();
}
BENCHMARK(BM_JointPhotonDistribution)->Arg(10)->Arg(50)->Arg(70)->Arg(90);

void BM_CoincidenceProbabilities(benchmark::State& state) {
  const auto dist = joint_photon_distribution(PdcSource(0.7), {0.3, 0.0}, {0.7, 0.0});
  const auto model = static_cast<Postprocessing>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(coincidence_probabilities(dist, {0.9, 1e-6}, model));
  }
}
BENCHMARK(BM_CoincidenceProbabilities)->DenseRange(0, 2);

void BM_PipelineCorrelation(benchmark::State& state) {
  const PdcSource source(tanh_chi_of(state));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        pipeline_correlation(source, {0.9, 1e-6}, Postprocessing::NaiveOnOff, {0.3, 0.0}, {}));
  }
}
BENCHMARK(BM_PipelineCorrelation)->Arg(10)->Arg(50)->Arg(70);

void BM_OnOffClosedForm(benchmark::State& state) {
  double delta = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(onoff_probability(0.5, 0.9, 1e-6, delta, 0.0, Channel::Transmitted,
                                               Channel::Reflected));
    delta += 1e-6;
  }
}
BENCHMARK(BM_OnOffClosedForm);

void BM_MaximizeBell(benchmark::State& state) {
  const PdcSource source(tanh_chi_of(state));
  for (auto _ : state) {
    benchmark::DoNotOptimize(maximize_bell(source, {0.9, 1e-6}, Postprocessing::NaiveOnOff));
  }
}
BENCHMARK(BM_MaximizeBell)->Arg(10)->Arg(50)->Arg(70)->Unit(benchmark::kMillisecond);

void BM_TomographyScanPoint(benchmark::State& state) {
  const PdcSource source(0.5);
  const auto basis = TomographyBasis::skewed();
  for (auto _ : state) {
    const auto e = measure_correlation_matrix(source, {0.6, 1e-6}, Postprocessing::NaiveOnOff, basis);
    benchmark::DoNotOptimize(reconstruct_density(e, basis));
  }
}
BENCHMARK(BM_TomographyScanPoint)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
