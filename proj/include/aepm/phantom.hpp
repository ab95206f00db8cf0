#pragma once

#include <cstddef>
#include <cstdint>

#include "aepm/image.hpp"

namespace aepm {

/// Synthetic MLO-like mammogram: a half-ellipse breast anchored to the left
/// border, a bright triangular muscle in its top-left corner, and optional
/// bright rectangles in the background standing in for film labels.
///
/// Geometry for an S x S phantom (1-based columns x, rows y):
///   breast  x <= 0.85 S * sqrt(1 - ((y - 0.45 S) / 0.6 S)^2)
///   muscle  x <  truth(y) = round(1 + W (1 - t) + 4 k W t (1 - t)),
///           t = (y - 1) / H, W = muscle_base_width * S, H = muscle_height * S,
///           k = edge_curvature
/// Noise is Gaussian (Box-Muller over std::mt19937_64 seeded with `seed`),
/// added inside the breast only, clipped to [0, 1] and quantized to the 8-bit
/// grid like a PGM sample.
struct PhantomSpec {
    std::size_t size = 1024;
    double muscle_intensity = 0.85;
    double tissue_intensity = 0.45;
    double muscle_base_width = 0.45;
    double muscle_height = 0.55;
    double edge_curvature = 0.0;
    double noise_sigma = 0.02;
    std::size_t n_labels = 1;
    std::uint64_t seed = 1;
};

struct Phantom {
    GrayImage image;
    EdgePolyline truth;
};

/// Throws DomainError for an invalid or geometrically impossible spec (the
/// muscle must leave breast tissue to its right in every row).
Phantom generate_phantom(const PhantomSpec& spec);

}  // namespace aepm
