#pragma once

// Independent reference computations used only by the tests. None of these
// share code with the library paths they check.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "aepm/image.hpp"

namespace oracle {

/// Beta(a, b) distribution function by adaptive Simpson quadrature of the
/// density, normalized with std::beta.
double beta_cdf_quadrature(double x, double a, double b, double tol = 1e-13);

/// Labels by iterative flood fill from each unvisited foreground pixel in
/// row-major order. Returns one label per pixel (0 = background).
std::vector<std::uint32_t> flood_fill_labels(const std::vector<std::uint8_t>& bits, std::size_t width,
                                             std::size_t height, bool eight);

struct PixelSetError {
    std::size_t false_positive = 0;
    std::size_t false_negative = 0;
    std::size_t reference_area = 0;
};

/// Rasterizes both regions {x < E(y)} over the reference rows on a
/// width-column grid and counts set differences pixel by pixel.
PixelSetError rasterized_error(const aepm::EdgePolyline& proposed, const aepm::EdgePolyline& reference,
                               std::size_t width);

/// Counts pixels per 8-bit level by comparing each pixel against every
/// level's half-open interval [(q - 0.5) / 255, (q + 0.5) / 255).
std::vector<std::uint64_t> count_levels(const aepm::GrayImage& img);

/// Random image with every pixel on the /255 grid.
aepm::GrayImage random_quantized_image(std::mt19937_64& rng, std::size_t width, std::size_t height,
                                       double zero_fraction = 0.0);

}  // namespace oracle
