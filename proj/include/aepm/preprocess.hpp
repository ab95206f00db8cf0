#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "aepm/image.hpp"
#include "aepm/kernels.hpp"

namespace aepm {

/// Counts per 8-bit gray level; pixel v lands in bin floor(v * 255 + 0.5).
struct Histogram {
    LevelCounts bins{};
    std::uint64_t total = 0;
};

enum class Connectivity { Four = 4, Eight = 8 };

struct ThresholdResult {
    double c = 0.0;         // intensity in [0, 1]
    int bin = 0;            // c * 255
    bool otsu_fallback = false;
};

struct LabelMap {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint32_t> labels;  // 0 = background
    std::vector<std::size_t> component_sizes;  // index 0 unused (always 0)

    std::size_t component_count() const noexcept {
        return component_sizes.empty() ? 0 : component_sizes.size() - 1;
    }
    std::uint32_t operator()(std::size_t col, std::size_t row) const noexcept {
        return labels[row * width + col];
    }
};

struct BackgroundRemoval {
    GrayImage clean;
    ThresholdResult threshold;
    std::size_t objects_removed = 0;
    BinaryMask foreground;
};

Histogram gray_histogram(const GrayImage& img);

/// Moving average of width 5 over the bins; windows are truncated at the ends
/// and divided by the number of bins they actually cover.
std::vector<double> smooth_histogram(const Histogram& hist);

/// First valley of the smoothed gray-level density that follows a peak. When
/// no such valley exists the Otsu threshold is returned with `otsu_fallback`
/// set. Throws PipelineError for an empty histogram.
ThresholdResult find_threshold(const Histogram& hist);

/// Otsu threshold bin t: levels <= t form the dark class.
int otsu_bin(const Histogram& hist);

/// D(x, y) = 1 iff I(x, y) > c.
BinaryMask binarize(const GrayImage& img, double c);

/// Component labels in order of each component's first pixel in a row-major
/// scan.
LabelMap label_components(const BinaryMask& mask, Connectivity connectivity = Connectivity::Eight);

/// Mask of the component with the most pixels, smallest label on ties. Throws
/// PipelineError("no foreground object") when there are no components.
BinaryMask largest_component(const LabelMap& lm);

/// Threshold, label, and keep only the largest object at its original
/// intensities.
BackgroundRemoval remove_background(const GrayImage& img,
                                    Connectivity connectivity = Connectivity::Eight);

}  // namespace aepm
