#include "aepm/beta_transform.hpp"

#include <cmath>
#include <limits>

#include "aepm/error.hpp"

namespace aepm {

namespace {

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
double beta_continued_fraction(double x, double a, double b) {
    constexpr int kMaxIter = 10000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;

        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double reg_inc_beta(double x, double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
        throw DomainError("reg_inc_beta: shape parameters must be positive");
    }
    if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainError("reg_inc_beta: x must lie in [0, 1]");
    }
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    const double log_front = std::lgamma(alpha + beta) - std::lgamma(alpha) - std::lgamma(beta) +
                             alpha * std::log(x) + beta * std::log1p(-x);
    const double front = std::exp(log_front);
    // The fraction converges fastest below the mean-like switch point; above
    // it evaluate the complement through I_x(a, b) = 1 - I_{1-x}(b, a).
    if (x < (alpha + 1.0) / (alpha + beta + 2.0)) {
        return front * beta_continued_fraction(x, alpha, beta) / alpha;
    }
    return 1.0 - front * beta_continued_fraction(1.0 - x, beta, alpha) / beta;
}

TransformLut::TransformLut(const BetaParams& params) : params_(params) {
    for (int q = 0; q < 256; ++q) {
        levels_[static_cast<std::size_t>(q)] = reg_inc_beta(q / 255.0, params.alpha, params.beta);
    }
}

TransformLut build_lut(const BetaParams& params) { return TransformLut(params); }

void apply_transform(const GrayImage& img, const TransformLut& lut, GrayImage& out) {
    if (out.width() != img.width() || out.height() != img.height()) {
        out = GrayImage(img.width(), img.height(), 0.0, img.source_max_value());
    }
    kernels::apply_table(img.pixels(), lut.levels(), lut.params(), out.pixels());
}

GrayImage apply_transform(const GrayImage& img, const TransformLut& lut) {
    GrayImage out(img.width(), img.height(), 0.0, img.source_max_value());
    apply_transform(img, lut, out);
    return out;
}

double mean_nonzero_intensity(const GrayImage& img) {
    const NonzeroSum s = kernels::nonzero_sum(img.pixels(), img.width());
    if (s.count == 0) {
        throw PipelineError("no foreground");
    }
    return s.sum / static_cast<double>(s.count);
}

}  // namespace aepm
