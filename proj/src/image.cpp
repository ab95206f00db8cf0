#include "aepm/image.hpp"

#include <algorithm>
#include <string>

#include "aepm/error.hpp"

namespace aepm {

GrayImage::GrayImage(std::size_t width, std::size_t height, double fill,
                     std::uint32_t source_max_value)
    : GrayImage(width, height, std::vector<double>(width * height, fill), source_max_value) {}

GrayImage::GrayImage(std::size_t width, std::size_t height, std::vector<double> pixels,
                     std::uint32_t source_max_value)
    : width_(width), height_(height), pixels_(std::move(pixels)),
      source_max_value_(source_max_value) {
    if (pixels_.size() != width_ * height_) {
        throw DomainError("GrayImage: expected " + std::to_string(width_ * height_) +
                          " pixels, got " + std::to_string(pixels_.size()));
    }
    const bool in_range = std::all_of(pixels_.begin(), pixels_.end(),
                                      [](double v) { return v >= 0.0 && v <= 1.0; });
    if (!in_range) {
        throw DomainError("GrayImage: pixel intensity outside [0, 1]");
    }
}

std::size_t BinaryMask::count() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

}  // namespace aepm
