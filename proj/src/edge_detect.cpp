#include "aepm/edge_detect.hpp"

#include <algorithm>
#include <array>
#include <tuple>
#include <cmath>
#include <string>

#include <Eigen/Dense>
#include <omp.h>

#include "aepm/error.hpp"
#include "aepm/image_io.hpp"

namespace aepm {

std::vector<double> beta_grid(const SegmentConfig& config) {
    if (!(config.beta_step > 0.0) || !(config.beta_min > 0.0) || config.beta_max < config.beta_min) {
        throw DomainError("beta grid: need 0 < beta_min <= beta_max and beta_step > 0");
    }
    const auto steps = static_cast<std::size_t>(
        std::floor((config.beta_max - config.beta_min) / config.beta_step + 1e-9));
    std::vector<double> grid;
    grid.reserve(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) {
        // Snap to 1e-9 so 2 + 0.1 * 3 reads back as 2.3.
        const double b = config.beta_min + static_cast<double>(i) * config.beta_step;
        grid.push_back(std::round(b * 1e9) / 1e9);
    }
    return grid;
}

std::vector<std::pair<double, double>> SegmentationResult::per_beta_scores() const {
    std::vector<std::pair<double, double>> out;
    out.reserve(per_beta.size());
    for (const auto& c : per_beta) out.emplace_back(c.beta, c.score);
    return out;
}

EdgePolyline rough_edge(const GrayImage& g_img, double mu, std::size_t min_rows) {
    EdgePolyline edge;
    const std::size_t w = g_img.width();
    for (std::size_t r = 0; r < g_img.height(); ++r) {
        const auto row = g_img.row(r);
        std::size_t found = 0;
        for (std::size_t c = 0; c < w; ++c) {
            if (row[c] > 0.0 && row[c] < mu) {
                found = c + 1;
                break;
            }
        }
        if (found <= 2) break;
        edge.push_back({static_cast<double>(found), r + 1});
    }
    if (edge.size() < min_rows) {
        throw PipelineError("degenerate edge: " + std::to_string(edge.size()) + " rows, need " +
                            std::to_string(min_rows));
    }
    return edge;
}

namespace {

constexpr int kDegree = 3;

// Clamped knot vector on [lo, hi] with `ctrl` control points.
std::vector<double> clamped_uniform_knots(double lo, double hi, std::size_t ctrl) {
    std::vector<double> knots;
    knots.reserve(ctrl + kDegree + 1);
    for (int i = 0; i <= kDegree; ++i) knots.push_back(lo);
    const std::size_t interior = ctrl - kDegree - 1;
    for (std::size_t j = 1; j <= interior; ++j) {
        knots.push_back(lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(interior + 1));
    }
    for (int i = 0; i <= kDegree; ++i) knots.push_back(hi);
    return knots;
}

std::size_t find_span(const std::vector<double>& knots, std::size_t ctrl, double t) {
    if (t >= knots[ctrl]) return ctrl - 1;
    auto it = std::upper_bound(knots.begin() + kDegree, knots.begin() + static_cast<std::ptrdiff_t>(ctrl) + 1, t);
    return static_cast<std::size_t>(it - knots.begin()) - 1;
}

// The degree + 1 nonzero basis functions at t on `span` (Cox-de Boor).
std::array<double, kDegree + 1> basis_functions(const std::vector<double>& knots, std::size_t span, double t) {
    std::array<double, kDegree + 1> n{};
    std::array<double, kDegree + 1> left{};
    std::array<double, kDegree + 1> right{};
    n[0] = 1.0;
    for (int j = 1; j <= kDegree; ++j) {
        left[j] = t - knots[span + 1 - j];
        right[j] = knots[span + j] - t;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            const double temp = n[r] / (right[r + 1] + left[j - r]);
            n[r] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        n[j] = saved;
    }
    return n;
}

}  // namespace

EdgePolyline smooth_edge_bspline(const EdgePolyline& edge, std::size_t image_width, double ctrl_divisor) {
    const std::size_t n = edge.size();
    if (n < 8) {
        throw PipelineError("smooth_edge_bspline: need at least 8 rows, got " + std::to_string(n));
    }
    if (!(ctrl_divisor > 0.0)) {
        throw DomainError("smooth_edge_bspline: control-point divisor must be positive");
    }
    const auto extra = std::max<long>(4, std::lround(static_cast<double>(n) / ctrl_divisor));
    const std::size_t ctrl = static_cast<std::size_t>(extra) + 4;
    const double lo = static_cast<double>(edge.front().y);
    const double hi = static_cast<double>(edge.back().y);
    const auto knots = clamped_uniform_knots(lo, hi, ctrl);

    Eigen::MatrixXd design = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(ctrl));
    Eigen::VectorXd target(static_cast<Eigen::Index>(n));
    std::vector<std::size_t> spans(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(edge[i].y);
        spans[i] = find_span(knots, ctrl, t);
        const auto basis = basis_functions(knots, spans[i], t);
        for (int k = 0; k <= kDegree; ++k) {
            design(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(spans[i] - kDegree + k)) = basis[k];
        }
        target(static_cast<Eigen::Index>(i)) = edge[i].x;
    }
    const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(target);
    const Eigen::VectorXd fitted = design * coef;

    const double upper = image_width == 0 ? 1e6 : static_cast<double>(image_width);
    EdgePolyline out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = {std::clamp(fitted(static_cast<Eigen::Index>(i)), 1.0, upper), edge[i].y};
    }
    return out;
}

double edge_contrast_score(const GrayImage& g_img, const EdgePolyline& edge, int offset) {
    const auto w = static_cast<long>(g_img.width());
    double sum = 0.0;
    std::size_t rows = 0;
    for (const auto& p : edge) {
        if (p.y < 1 || p.y > g_img.height()) continue;
        const long xi = std::lround(p.x);
        const long left = xi - offset;
        const long right = xi + offset;
        if (left < 1 || right > w) continue;
        const double a = g_img(static_cast<std::size_t>(left - 1), p.y - 1);
        const double b = g_img(static_cast<std::size_t>(right - 1), p.y - 1);
        if (a == 0.0 || b == 0.0) continue;
        sum += std::fabs(a - b);
        ++rows;
    }
    return rows == 0 ? 0.0 : sum / static_cast<double>(rows);
}

SegmentationResult select_beta(const GrayImage& clean, std::span<const double> grid, double alpha,
                               const SegmentConfig& config) {
    std::vector<TransformLut> luts;
    luts.reserve(grid.size());
    for (double b : grid) luts.emplace_back(BetaParams{alpha, b});
    return select_beta(clean, std::span<const TransformLut>(luts), config);
}

SegmentationResult select_beta(const GrayImage& clean, std::span<const TransformLut> luts,
                               const SegmentConfig& config) {
    if (luts.empty()) {
        throw DomainError("select_beta: empty beta grid");
    }
    if (!(config.bspline_ctrl_divisor > 0.0)) {
        throw DomainError("select_beta: bspline_ctrl_divisor must be positive");
    }
    SegmentationResult result;
    result.clean = clean;
    result.mu = mean_nonzero_intensity(clean);
    result.per_beta.resize(luts.size());

    const auto count = static_cast<std::ptrdiff_t>(luts.size());
#pragma omp parallel num_threads(thread_count()) if (thread_count() > 1 && !omp_in_parallel())
    {
        GrayImage transformed;
#pragma omp for schedule(dynamic, 1)
        for (std::ptrdiff_t i = 0; i < count; ++i) {
            const auto k = static_cast<std::size_t>(i);
            BetaCandidate cand;
            cand.beta = luts[k].params().beta;
            apply_transform(clean, luts[k], transformed);
            const double mu = config.mu_mode == MuMode::Clean ? result.mu : mean_nonzero_intensity(transformed);
            try {
                cand.rough = rough_edge(transformed, mu, config.min_edge_rows);
                cand.smoothed = smooth_edge_bspline(cand.rough, clean.width(), config.bspline_ctrl_divisor);
                cand.score = edge_contrast_score(transformed, cand.smoothed, config.edge_offset);
                cand.degenerate = false;
            } catch (const PipelineError&) {
                cand.rough.clear();
                cand.smoothed.clear();
            }
            result.per_beta[k] = std::move(cand);
        }
    }

    const BetaCandidate* best = nullptr;
    for (const auto& cand : result.per_beta) {
        if (cand.degenerate) continue;
        if (best == nullptr || cand.score > best->score) best = &cand;
    }
    if (best == nullptr) {
        result.diagnostics.edge_failure = true;
    } else {
        result.beta_hat = best->beta;
        result.edge = best->smoothed;
        result.rough_edge = best->rough;
    }
    result.segmented = clean;
    result.muscle_mask = BinaryMask(clean.width(), clean.height());
    return result;
}

std::pair<GrayImage, BinaryMask> remove_muscle(const GrayImage& clean, const EdgePolyline& edge) {
    GrayImage out = clean;
    BinaryMask mask(clean.width(), clean.height());
    const std::size_t w = clean.width();
    for (const auto& p : edge) {
        if (p.y < 1 || p.y > clean.height()) continue;
        const std::size_t r = p.y - 1;
        // Columns c (1-based) with c < x, i.e. the first ceil(x) - 1 columns.
        const double limit = std::ceil(p.x) - 1.0;
        const std::size_t cols = limit <= 0.0 ? 0 : std::min(w, static_cast<std::size_t>(limit));
        for (std::size_t c = 0; c < cols; ++c) {
            out(c, r) = 0.0;
            mask(c, r) = 1;
        }
    }
    return {std::move(out), std::move(mask)};
}

Segmenter::Segmenter(SegmentConfig config) : config_(config) {
    if (!(config_.alpha > 0.0)) {
        throw DomainError("alpha must be positive");
    }
    if (config_.edge_offset < 1) {
        throw DomainError("edge_offset must be at least 1");
    }
    for (double b : beta_grid(config_)) luts_.emplace_back(BetaParams{config_.alpha, b});
}

SegmentationResult Segmenter::run(const GrayImage& img) const {
    if (img.width() < 8 || img.height() < 8) {
        throw DomainError("segment: image must be at least 8x8, got " + std::to_string(img.width()) + "x" +
                          std::to_string(img.height()));
    }
    GrayImage oriented;
    bool flipped = false;
    switch (config_.orientation) {
        case Orientation::Auto: std::tie(oriented, flipped) = normalize_orientation(img); break;
        case Orientation::Keep: oriented = img; break;
        case Orientation::Mirror: oriented = mirror_horizontal(img); flipped = true; break;
    }

    BackgroundRemoval bg = remove_background(oriented, config_.connectivity);
    SegmentationResult result = select_beta(bg.clean, std::span<const TransformLut>(luts_), config_);
    result.threshold = bg.threshold;
    result.objects_removed = bg.objects_removed;
    result.diagnostics.threshold_fallback = bg.threshold.otsu_fallback;
    result.diagnostics.was_flipped = flipped;
    if (!result.diagnostics.edge_failure) {
        auto [seg, mask] = remove_muscle(result.clean, result.edge);
        result.segmented = std::move(seg);
        result.muscle_mask = std::move(mask);
    }
    return result;
}

SegmentationResult segment(const GrayImage& img, const SegmentConfig& config) {
    return Segmenter(config).run(img);
}

}  // namespace aepm
