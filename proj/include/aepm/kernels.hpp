#pragma once

// Per-pixel inner loops of the pipeline. Each kernel has an OpenMP version in
// `aepm::kernels` and a plain serial reference in `aepm::kernels::serial`;
// both must produce identical results for any thread count.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace aepm {

struct BetaParams;

using LevelTable = std::array<double, 256>;
using LevelCounts = std::array<std::uint64_t, 256>;

struct NonzeroSum {
    double sum = 0.0;
    std::size_t count = 0;
};

namespace kernels {

LevelCounts histogram(std::span<const double> pixels);
void binarize(std::span<const double> pixels, double threshold, std::span<std::uint8_t> out);
/// Pixels on the /255 grid are looked up; anything else is evaluated directly.
void apply_table(std::span<const double> pixels, const LevelTable& table, const BetaParams& params,
                 std::span<double> out);
/// Sum and count of strictly positive pixels. Partial sums are formed per row
/// of `width` pixels and folded in row order, so the result does not depend
/// on the thread count.
NonzeroSum nonzero_sum(std::span<const double> pixels, std::size_t width);

namespace serial {

LevelCounts histogram(std::span<const double> pixels);
void binarize(std::span<const double> pixels, double threshold, std::span<std::uint8_t> out);
void apply_table(std::span<const double> pixels, const LevelTable& table, const BetaParams& params,
                 std::span<double> out);
NonzeroSum nonzero_sum(std::span<const double> pixels, std::size_t width);

}  // namespace serial
}  // namespace kernels

/// Worker count used by the OpenMP kernels and the per-beta loop.
void set_thread_count(int n);
int thread_count();

}  // namespace aepm
