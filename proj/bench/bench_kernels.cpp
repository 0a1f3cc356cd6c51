// Serial reference kernels against their OpenMP counterparts on one epoch's
// worth of English training frames.
#include <benchmark/benchmark.h>

#include <numeric>

#include "visemelab/experiment.hpp"
#include "visemelab/kernels.hpp"

namespace {

using namespace visemelab;

struct Fixture {
  Fixture() {
    bundle = load_bundle(DataPaths::bundled());
    merged = build_inventory(InventoryScope::Merged(), bundle.tables);
    GeneratorParams gp;
    model = make_confusability_model(merged, gp, 7);
    data = generate_features(*bundle.corpora.english, model, merged, 7);
    params = init_model(merged, gp.dim, 7, 0.1);
    weights = class_weights(data, merged.size(), true);
    frames.resize(data.num_frames());
    std::iota(frames.begin(), frames.end(), 0);
  }
  Bundle bundle;
  VisemeInventory merged;
  ConfusabilityModel model;
  FeatureDataset data;
  ModelParams params;
  std::vector<double> weights;
  std::vector<std::size_t> frames;
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

void BM_GradientSerial(benchmark::State& state) {
  auto& f = fixture();
  Gradient g;
  for (auto _ : state) {
    batch_gradient_serial(f.params, f.data, f.frames, f.weights, g);
    benchmark::DoNotOptimize(g.loss);
  }
  state.SetItemsProcessed(state.iterations() * f.frames.size());
}

void BM_GradientParallel(benchmark::State& state) {
  auto& f = fixture();
  Gradient g;
  for (auto _ : state) {
    batch_gradient(f.params, f.data, f.frames, f.weights, g);
    benchmark::DoNotOptimize(g.loss);
  }
  state.SetItemsProcessed(state.iterations() * f.frames.size());
}

void BM_EvaluateSerial(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_serial(f.params, f.data).overall());
  state.SetItemsProcessed(state.iterations() * f.data.num_frames());
}

void BM_EvaluateParallel(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(f.params, f.data).overall());
  state.SetItemsProcessed(state.iterations() * f.data.num_frames());
}

void BM_GenerateSerial(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        generate_features_serial(*f.bundle.corpora.english, f.model, f.merged, 11).num_frames());
  }
}

void BM_GenerateParallel(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        generate_features(*f.bundle.corpora.english, f.model, f.merged, 11).num_frames());
  }
}

}  // namespace

BENCHMARK(BM_GradientSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GradientParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GenerateSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GenerateParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
