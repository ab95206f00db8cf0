#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "aepm/beta_transform.hpp"
#include "aepm/image.hpp"
#include "aepm/preprocess.hpp"

namespace aepm {

/// Which mean intensity the rough-edge scan compares transformed pixels with.
enum class MuMode {
    Clean,    // mean nonzero intensity of the untransformed clean image
    PerBeta,  // mean nonzero intensity of each beta-transformed image
};

enum class Orientation { Auto, Keep, Mirror };

struct SegmentConfig {
    double alpha = 5.0;
    double beta_min = 2.0;
    double beta_max = 6.0;
    double beta_step = 0.1;
    int edge_offset = 2;
    std::size_t min_edge_rows = 10;
    double bspline_ctrl_divisor = 64.0;
    MuMode mu_mode = MuMode::Clean;
    Connectivity connectivity = Connectivity::Eight;
    Orientation orientation = Orientation::Auto;
};

/// beta_min, beta_min + step, ... up to beta_max inclusive. Throws
/// DomainError when the range or step is invalid.
std::vector<double> beta_grid(const SegmentConfig& config);

struct BetaCandidate {
    double beta = 0.0;
    double score = -std::numeric_limits<double>::infinity();
    bool degenerate = true;
    EdgePolyline rough;
    EdgePolyline smoothed;
};

struct Diagnostics {
    bool threshold_fallback = false;
    bool was_flipped = false;
    bool edge_failure = false;
};

struct SegmentationResult {
    double beta_hat = std::numeric_limits<double>::quiet_NaN();
    double mu = 0.0;
    EdgePolyline edge;        // smoothed edge for beta_hat
    EdgePolyline rough_edge;  // rough edge for beta_hat
    BinaryMask muscle_mask;
    GrayImage clean;          // after background removal, normalized orientation
    GrayImage segmented;      // clean with the muscle zeroed
    std::vector<BetaCandidate> per_beta;
    Diagnostics diagnostics;
    ThresholdResult threshold;
    std::size_t objects_removed = 0;

    std::vector<std::pair<double, double>> per_beta_scores() const;
};

/// Per row from the top, the leftmost pixel with 0 < g < mu. The scan stops
/// at the first row with no such pixel or whose pixel sits in column 1 or 2.
/// Throws PipelineError when fewer than `min_rows` rows were collected.
EdgePolyline rough_edge(const GrayImage& g_img, double mu, std::size_t min_rows = 10);

/// Least-squares cubic B-spline fit of x(y) with clamped uniform knots and
/// max(4, round(n / ctrl_divisor)) + 4 control points, resampled at the same
/// rows and clamped to [1, image_width]. Throws PipelineError for n < 8.
EdgePolyline smooth_edge_bspline(const EdgePolyline& edge, std::size_t image_width,
                                 double ctrl_divisor = 64.0);

/// Mean |g(xi - offset, y) - g(xi + offset, y)| over edge rows where both
/// samples are inside the image and nonzero, xi = round(x_y). Zero when no
/// row qualifies.
double edge_contrast_score(const GrayImage& g_img, const EdgePolyline& edge, int offset = 2);

/// Rough edge, smoothing and contrast score for every beta in `grid`; the
/// best score wins (smallest beta on ties, degenerate betas excluded). The
/// result carries the clean image but has no muscle removed.
SegmentationResult select_beta(const GrayImage& clean, std::span<const double> grid, double alpha,
                               const SegmentConfig& config = {});
SegmentationResult select_beta(const GrayImage& clean, std::span<const TransformLut> luts,
                               const SegmentConfig& config = {});

/// Zeroes every pixel left of the edge (x < x_y) in the edge's rows.
std::pair<GrayImage, BinaryMask> remove_muscle(const GrayImage& clean, const EdgePolyline& edge);

/// Full pipeline with the transform tables built once and reused.
class Segmenter {
public:
    explicit Segmenter(SegmentConfig config = {});

    const SegmentConfig& config() const noexcept { return config_; }
    const std::vector<TransformLut>& luts() const noexcept { return luts_; }

    SegmentationResult run(const GrayImage& img) const;

private:
    SegmentConfig config_;
    std::vector<TransformLut> luts_;
};

SegmentationResult segment(const GrayImage& img, const SegmentConfig& config = {});

}  // namespace aepm
