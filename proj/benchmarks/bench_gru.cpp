// Forward and forward+backward cost of the recurrent classifier at the
// production feature width and a few utterance lengths.
#include <benchmark/benchmark.h>

#include "emomine/gru.hpp"
#include "emomine/rng.hpp"

using namespace emomine;

namespace {

Spectrogram random_spec(std::size_t frames, std::size_t bands, std::uint64_t seed) {
    Spectrogram spec;
    spec.values = Mat(frames, bands);
    spec.valid_frames = frames;
    Rng rng(seed);
    for (double& v : spec.values.data) v = 0.5 * rng.gaussian();
    return spec;
}

}  // namespace

static void BM_forward(benchmark::State& state) {
    const std::size_t frames = static_cast<std::size_t>(state.range(0));
    const GruParams params = init_params(1, 128, kDefaultHiddenDim, 3);
    const Spectrogram spec = random_spec(frames, 128, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(forward(params, spec));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(frames));
}
BENCHMARK(BM_forward)->Arg(32)->Arg(128)->Arg(515)->Unit(benchmark::kMicrosecond);

static void BM_forward_backward(benchmark::State& state) {
    const std::size_t frames = static_cast<std::size_t>(state.range(0));
    const GruParams params = init_params(1, 128, kDefaultHiddenDim, 3);
    const Spectrogram spec = random_spec(frames, 128, 2);
    for (auto _ : state) {
        const GruState st = forward(params, spec);
        benchmark::DoNotOptimize(backward(params, st, spec, 1));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(frames));
}
BENCHMARK(BM_forward_backward)->Arg(32)->Arg(128)->Arg(515)->Unit(benchmark::kMicrosecond);

static void BM_train_epoch(benchmark::State& state) {
    const std::size_t n = 32;
    std::vector<Spectrogram> specs;
    for (std::uint64_t i = 0; i < n; ++i) specs.push_back(random_spec(64, 128, 10 + i));
    std::vector<TrainExample> data;
    for (std::size_t i = 0; i < n; ++i) data.push_back({&specs[i], i % 3});

    GruParams params = init_params(3, 128, kDefaultHiddenDim, 3);
    AdamState opt = AdamState::zeros_like(params);
    TrainConfig cfg;
    std::size_t epoch = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(train_epoch(params, opt, data, cfg, epoch++));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_train_epoch)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
