#include "aepm/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "aepm/error.hpp"

namespace aepm {

namespace {

constexpr double kBreastSemiAxisX = 0.85;
constexpr double kBreastCenterY = 0.45;
constexpr double kBreastSemiAxisY = 0.6;
constexpr double kTissueMargin = 4.0;  // px of tissue required right of the muscle
constexpr double kLabelIntensity = 1.0;

class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

    double uniform() {
        // 53 random bits, strictly inside (0, 1).
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

double quantize(double v) { return std::round(std::clamp(v, 0.0, 1.0) * 255.0) / 255.0; }

void validate(const PhantomSpec& s) {
    auto fraction = [](double f) { return f > 0.0 && f < 1.0; };
    if (s.size < 16) throw DomainError("phantom: size must be at least 16");
    if (!(s.tissue_intensity > 0.0) || !(s.muscle_intensity > s.tissue_intensity) || s.muscle_intensity > 1.0) {
        throw DomainError("phantom: need 1 >= muscle_intensity > tissue_intensity > 0");
    }
    if (!fraction(s.muscle_base_width) || !fraction(s.muscle_height)) {
        throw DomainError("phantom: muscle fractions must lie in (0, 1)");
    }
    if (s.edge_curvature < 0.0 || s.edge_curvature >= 0.25) {
        throw DomainError("phantom: edge_curvature must lie in [0, 0.25)");
    }
    if (s.noise_sigma < 0.0) throw DomainError("phantom: noise_sigma must be non-negative");
}

}  // namespace

Phantom generate_phantom(const PhantomSpec& spec) {
    validate(spec);
    const std::size_t n = spec.size;
    const double size = static_cast<double>(n);

    std::vector<double> breast_width(n);
    for (std::size_t r = 0; r < n; ++r) {
        const double y = static_cast<double>(r + 1);
        const double u = (y - kBreastCenterY * size) / (kBreastSemiAxisY * size);
        breast_width[r] = u * u >= 1.0 ? 0.0 : kBreastSemiAxisX * size * std::sqrt(1.0 - u * u);
    }

    const double base = spec.muscle_base_width * size;
    const double height = spec.muscle_height * size;
    Phantom out;
    for (std::size_t r = 0; r < n; ++r) {
        const double t = static_cast<double>(r) / height;
        if (t >= 1.0) break;
        const double boundary =
            std::round(1.0 + base * (1.0 - t) + 4.0 * spec.edge_curvature * base * t * (1.0 - t));
        if (boundary < 2.0) break;
        if (boundary - 1.0 + kTissueMargin > breast_width[r]) {
            throw DomainError("phantom: muscle wider than breast at row " + std::to_string(r + 1));
        }
        out.truth.push_back({boundary, r + 1});
    }
    if (out.truth.empty()) throw DomainError("phantom: muscle covers no pixels");

    std::vector<double> pixels(n * n, 0.0);
    const double tissue = quantize(spec.tissue_intensity);
    const double muscle = quantize(spec.muscle_intensity);

    GaussianSource rng(spec.seed);

    // Labels live right of the widest breast row with a margin on both sides.
    const auto label_w = std::max<std::size_t>(2, static_cast<std::size_t>(0.05 * size));
    const auto label_h = std::max<std::size_t>(2, static_cast<std::size_t>(0.03 * size));
    const auto margin = std::max<std::size_t>(2, static_cast<std::size_t>(0.02 * size));
    const auto breast_max = static_cast<std::size_t>(std::ceil(kBreastSemiAxisX * size));
    const std::size_t x_lo = breast_max + margin;
    if (spec.n_labels > 0 && x_lo + label_w + margin > n) {
        throw DomainError("phantom: no room for background labels");
    }
    for (std::size_t k = 0; k < spec.n_labels; ++k) {
        const std::size_t x_span = n - margin - label_w - x_lo + 1;
        const std::size_t y_span = n - 2 * margin - label_h + 1;
        const std::size_t x0 = x_lo + static_cast<std::size_t>(rng.uniform() * static_cast<double>(x_span));
        const std::size_t y0 = margin + static_cast<std::size_t>(rng.uniform() * static_cast<double>(y_span));
        for (std::size_t r = y0; r < y0 + label_h; ++r) {
            for (std::size_t c = x0; c < x0 + label_w; ++c) pixels[r * n + c] = kLabelIntensity;
        }
    }

    for (std::size_t r = 0; r < n; ++r) {
        const double muscle_limit = r < out.truth.size() ? out.truth[r].x : 1.0;
        for (std::size_t c = 0; c < n; ++c) {
            const double x = static_cast<double>(c + 1);
            if (x > breast_width[r]) break;
            double v = x < muscle_limit ? muscle : tissue;
            if (spec.noise_sigma > 0.0) v = quantize(v + spec.noise_sigma * rng.normal());
            pixels[r * n + c] = v;
        }
    }

    out.image = GrayImage(n, n, std::move(pixels), 255);
    return out;
}

}  // namespace aepm
