// Throughput of the spectral front end: raw transform and the full
// banded extraction at typical utterance lengths.
#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "emomine/features.hpp"
#include "emomine/rng.hpp"
#include "emomine/wav.hpp"

using namespace emomine;

namespace {

std::vector<double> noise_frame(std::size_t n) {
    Rng rng(7);
    std::vector<double> frame(n);
    for (double& x : frame) x = rng.gaussian();
    return frame;
}

AudioBuffer noise_audio(std::uint32_t fs, double seconds) {
    Rng rng(13);
    AudioBuffer audio;
    audio.sample_rate_hz = fs;
    audio.samples.resize(static_cast<std::size_t>(fs * seconds));
    for (double& x : audio.samples) x = 0.1 * rng.gaussian();
    return audio;
}

}  // namespace

static void BM_dft(benchmark::State& state) {
    const auto frame = noise_frame(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(features::dft(frame));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_dft)->Arg(256)->Arg(1024)->Arg(4096);

static void BM_stft_bands(benchmark::State& state) {
    const AudioBuffer audio = noise_audio(16000, static_cast<double>(state.range(0)));
    const features::StftConfig cfg;
    for (auto _ : state) {
        benchmark::DoNotOptimize(features::stft_bands(audio, cfg));
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(audio.samples.size()));
}
BENCHMARK(BM_stft_bands)->Arg(1)->Arg(3)->Arg(10)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
