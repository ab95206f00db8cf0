// Serial reference kernels against their OpenMP versions. Threads for the
// parallel variants come from the benchmark argument.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "aepm/beta_transform.hpp"
#include "aepm/kernels.hpp"

namespace {

std::vector<double> quantized_pixels(std::size_t n) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> level(0, 255);
    std::vector<double> px(n);
    for (auto& v : px) v = level(rng) / 255.0;
    return px;
}

aepm::LevelTable table_for(const aepm::BetaParams& params) {
    const auto lut = aepm::build_lut(params);
    return lut.levels();
}

constexpr std::size_t kSide = 1024;

void BM_histogram_serial(benchmark::State& state) {
    const auto px = quantized_pixels(kSide * kSide);
    for (auto _ : state) benchmark::DoNotOptimize(aepm::kernels::serial::histogram(px));
}

void BM_histogram_omp(benchmark::State& state) {
    aepm::set_thread_count(static_cast<int>(state.range(0)));
    const auto px = quantized_pixels(kSide * kSide);
    for (auto _ : state) benchmark::DoNotOptimize(aepm::kernels::histogram(px));
    aepm::set_thread_count(1);
}

void BM_binarize_serial(benchmark::State& state) {
    const auto px = quantized_pixels(kSide * kSide);
    std::vector<std::uint8_t> out(px.size());
    for (auto _ : state) {
        aepm::kernels::serial::binarize(px, 3.0 / 255.0, out);
        benchmark::ClobberMemory();
    }
}

void BM_binarize_omp(benchmark::State& state) {
    aepm::set_thread_count(static_cast<int>(state.range(0)));
    const auto px = quantized_pixels(kSide * kSide);
    std::vector<std::uint8_t> out(px.size());
    for (auto _ : state) {
        aepm::kernels::binarize(px, 3.0 / 255.0, out);
        benchmark::ClobberMemory();
    }
    aepm::set_thread_count(1);
}

void BM_apply_table_serial(benchmark::State& state) {
    const aepm::BetaParams params{5.0, 3.0};
    const auto table = table_for(params);
    const auto px = quantized_pixels(kSide * kSide);
    std::vector<double> out(px.size());
    for (auto _ : state) {
        aepm::kernels::serial::apply_table(px, table, params, out);
        benchmark::ClobberMemory();
    }
}

void BM_apply_table_omp(benchmark::State& state) {
    aepm::set_thread_count(static_cast<int>(state.range(0)));
    const aepm::BetaParams params{5.0, 3.0};
    const auto table = table_for(params);
    const auto px = quantized_pixels(kSide * kSide);
    std::vector<double> out(px.size());
    for (auto _ : state) {
        aepm::kernels::apply_table(px, table, params, out);
        benchmark::ClobberMemory();
    }
    aepm::set_thread_count(1);
}

void BM_nonzero_sum_serial(benchmark::State& state) {
    const auto px = quantized_pixels(kSide * kSide);
    for (auto _ : state) benchmark::DoNotOptimize(aepm::kernels::serial::nonzero_sum(px, kSide));
}

void BM_nonzero_sum_omp(benchmark::State& state) {
    aepm::set_thread_count(static_cast<int>(state.range(0)));
    const auto px = quantized_pixels(kSide * kSide);
    for (auto _ : state) benchmark::DoNotOptimize(aepm::kernels::nonzero_sum(px, kSide));
    aepm::set_thread_count(1);
}

}  // namespace

BENCHMARK(BM_histogram_serial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_histogram_omp)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime()->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_binarize_serial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_binarize_omp)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime()->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_apply_table_serial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_apply_table_omp)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime()->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_nonzero_sum_serial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_nonzero_sum_omp)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime()->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
