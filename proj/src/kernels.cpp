#include "aepm/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <vector>

#include <omp.h>

#include "aepm/beta_transform.hpp"

namespace aepm {

namespace {

std::atomic<int> g_threads{1};

// Kernels called from inside the per-beta or per-image loops stay serial.
inline bool go_parallel() { return g_threads.load() > 1 && !omp_in_parallel(); }

inline double lookup_or_evaluate(double v, const LevelTable& table, const BetaParams& params) {
    const int q = quantize_level(v);
    if (std::fabs(v * 255.0 - q) <= 1e-9) {
        return table[static_cast<std::size_t>(q)];
    }
    return reg_inc_beta(v, params.alpha, params.beta);
}

inline std::ptrdiff_t ssize(std::span<const double> s) { return static_cast<std::ptrdiff_t>(s.size()); }

}  // namespace

void set_thread_count(int n) { g_threads.store(n < 1 ? 1 : n); }
int thread_count() { return g_threads.load(); }

namespace kernels {

LevelCounts histogram(std::span<const double> pixels) {
    LevelCounts total{};
    const std::ptrdiff_t n = ssize(pixels);
#pragma omp parallel num_threads(thread_count()) if (go_parallel())
    {
        LevelCounts local{};
#pragma omp for schedule(static) nowait
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            ++local[static_cast<std::size_t>(quantize_level(pixels[static_cast<std::size_t>(i)]))];
        }
#pragma omp critical(aepm_histogram)
        for (std::size_t b = 0; b < total.size(); ++b) total[b] += local[b];
    }
    return total;
}

void binarize(std::span<const double> pixels, double threshold, std::span<std::uint8_t> out) {
    const std::ptrdiff_t n = ssize(pixels);
#pragma omp parallel for schedule(static) num_threads(thread_count()) if (go_parallel())
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        out[k] = pixels[k] > threshold ? 1 : 0;
    }
}

void apply_table(std::span<const double> pixels, const LevelTable& table, const BetaParams& params,
                 std::span<double> out) {
    const std::ptrdiff_t n = ssize(pixels);
#pragma omp parallel for schedule(static) num_threads(thread_count()) if (go_parallel())
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        out[k] = lookup_or_evaluate(pixels[k], table, params);
    }
}

NonzeroSum nonzero_sum(std::span<const double> pixels, std::size_t width) {
    if (width == 0 || pixels.empty()) return {};
    const std::size_t rows = (pixels.size() + width - 1) / width;
    std::vector<double> row_sum(rows, 0.0);
    std::vector<std::size_t> row_count(rows, 0);
    const auto nrows = static_cast<std::ptrdiff_t>(rows);
#pragma omp parallel for schedule(static) num_threads(thread_count()) if (go_parallel())
    for (std::ptrdiff_t r = 0; r < nrows; ++r) {
        const std::size_t begin = static_cast<std::size_t>(r) * width;
        const std::size_t end = std::min(begin + width, pixels.size());
        double s = 0.0;
        std::size_t c = 0;
        for (std::size_t i = begin; i < end; ++i) {
            if (pixels[i] > 0.0) {
                s += pixels[i];
                ++c;
            }
        }
        row_sum[static_cast<std::size_t>(r)] = s;
        row_count[static_cast<std::size_t>(r)] = c;
    }
    NonzeroSum result;
    for (std::size_t r = 0; r < rows; ++r) {
        result.sum += row_sum[r];
        result.count += row_count[r];
    }
    return result;
}

namespace serial {

LevelCounts histogram(std::span<const double> pixels) {
    LevelCounts counts{};
    for (double v : pixels) ++counts[static_cast<std::size_t>(quantize_level(v))];
    return counts;
}

void binarize(std::span<const double> pixels, double threshold, std::span<std::uint8_t> out) {
    for (std::size_t i = 0; i < pixels.size(); ++i) out[i] = pixels[i] > threshold ? 1 : 0;
}

void apply_table(std::span<const double> pixels, const LevelTable& table, const BetaParams& params,
                 std::span<double> out) {
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        out[i] = lookup_or_evaluate(pixels[i], table, params);
    }
}

NonzeroSum nonzero_sum(std::span<const double> pixels, std::size_t width) {
    NonzeroSum result;
    if (width == 0) return result;
    for (std::size_t begin = 0; begin < pixels.size(); begin += width) {
        const std::size_t end = std::min(begin + width, pixels.size());
        double s = 0.0;
        std::size_t c = 0;
        for (std::size_t i = begin; i < end; ++i) {
            if (pixels[i] > 0.0) {
                s += pixels[i];
                ++c;
            }
        }
        result.sum += s;
        result.count += c;
    }
    return result;
}

}  // namespace serial
}  // namespace kernels
}  // namespace aepm
