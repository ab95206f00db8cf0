#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace aepm {

/// Row-major grayscale image with intensities normalized to [0, 1].
///
/// Storage is 0-based; the edge and metrics code works with the 1-based
/// (column, row) convention where (1, 1) is the top-left pixel.
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(std::size_t width, std::size_t height, double fill = 0.0,
              std::uint32_t source_max_value = 255);
    GrayImage(std::size_t width, std::size_t height, std::vector<double> pixels,
              std::uint32_t source_max_value = 255);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return pixels_.size(); }
    bool empty() const noexcept { return pixels_.empty(); }
    std::uint32_t source_max_value() const noexcept { return source_max_value_; }

    double operator()(std::size_t col, std::size_t row) const noexcept {
        return pixels_[row * width_ + col];
    }
    double& operator()(std::size_t col, std::size_t row) noexcept {
        return pixels_[row * width_ + col];
    }

    std::span<const double> pixels() const noexcept { return pixels_; }
    std::span<double> pixels() noexcept { return pixels_; }
    std::span<const double> row(std::size_t r) const noexcept {
        return std::span<const double>(pixels_).subspan(r * width_, width_);
    }

    bool operator==(const GrayImage&) const = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<double> pixels_;
    std::uint32_t source_max_value_ = 255;
};

class BinaryMask {
public:
    BinaryMask() = default;
    BinaryMask(std::size_t width, std::size_t height)
        : width_(width), height_(height), bits_(width * height, 0) {}

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return bits_.size(); }

    std::uint8_t operator()(std::size_t col, std::size_t row) const noexcept {
        return bits_[row * width_ + col];
    }
    std::uint8_t& operator()(std::size_t col, std::size_t row) noexcept {
        return bits_[row * width_ + col];
    }

    std::span<const std::uint8_t> bits() const noexcept { return bits_; }
    std::span<std::uint8_t> bits() noexcept { return bits_; }

    std::size_t count() const noexcept;

    bool operator==(const BinaryMask&) const = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<std::uint8_t> bits_;
};

struct EdgePoint {
    double x = 1.0;     // 1-based column, real valued
    std::size_t y = 1;  // 1-based row

    bool operator==(const EdgePoint&) const = default;
};

/// Muscle boundary, one point per row for rows 1..n.
using EdgePolyline = std::vector<EdgePoint>;

/// Intensity v mapped to its nearest 8-bit level.
inline int quantize_level(double v) noexcept {
    const double s = v * 255.0 + 0.5;
    const int q = static_cast<int>(s);
    return q < 0 ? 0 : (q > 255 ? 255 : q);
}

}  // namespace aepm
