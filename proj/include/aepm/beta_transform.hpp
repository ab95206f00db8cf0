#pragma once

#include "aepm/image.hpp"
#include "aepm/kernels.hpp"

namespace aepm {

struct BetaParams {
    double alpha = 5.0;
    double beta = 2.0;
};

/// Regularized incomplete Beta function I_x(alpha, beta), i.e. the Beta(alpha,
/// beta) distribution function at x. Throws DomainError for x outside [0, 1]
/// or non-positive shape parameters.
double reg_inc_beta(double x, double alpha, double beta);

/// Beta distribution function tabulated on the 256 levels of an 8-bit image.
class TransformLut {
public:
    explicit TransformLut(const BetaParams& params);

    const BetaParams& params() const noexcept { return params_; }
    const LevelTable& levels() const noexcept { return levels_; }
    double operator[](int q) const noexcept { return levels_[static_cast<std::size_t>(q)]; }

private:
    BetaParams params_;
    LevelTable levels_{};
};

TransformLut build_lut(const BetaParams& params);

/// g(x, y) = BDF(I(x, y); alpha, beta).
GrayImage apply_transform(const GrayImage& img, const TransformLut& lut);
void apply_transform(const GrayImage& img, const TransformLut& lut, GrayImage& out);

/// Mean over strictly positive pixels. Throws PipelineError("no foreground")
/// when every pixel is zero.
double mean_nonzero_intensity(const GrayImage& img);

}  // namespace aepm
