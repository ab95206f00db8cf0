#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "aepm/image.hpp"

namespace aepm {

struct ImageError {
    double fp = 0.0;
    double fn = 0.0;
    double area = 0.0;           // A(I), pixels
    std::size_t rows_compared = 0;  // p
};

/// Error-distribution categories, in the order they are tested.
enum class ErrorBin {
    BothBelow05,         // (FP, FN) < 0.05
    MinBelow05MaxBelow10,  // min < 0.05, max < 0.10
    MinBelow05MaxAbove10,  // min < 0.05, max > 0.10
    BothIn05To10,        // 0.05 < (FP, FN) < 0.10
    MinIn05To10MaxAbove10,  // 0.05 < min < 0.10, max > 0.10
    BothAbove10,         // (FP, FN) > 0.10
};

inline constexpr std::size_t kErrorBinCount = 6;

std::string_view bin_label(ErrorBin bin);

/// First matching category. Values sitting exactly on a boundary fall through
/// to later categories; anything left over lands in the last one.
ErrorBin classify(double fp, double fn);

struct CorpusReport {
    std::size_t n_images = 0;
    double fp_mean = 0.0;
    double fn_mean = 0.0;
    std::array<std::size_t, kErrorBinCount> bins{};
    std::vector<ImageError> per_image;
};

/// Pixels strictly left of the reference edge: sum over rows of ceil(E) - 1.
/// Throws PipelineError for an empty edge.
double muscle_area(const EdgePolyline& reference);

/// Area-normalized false positive / false negative proportions over the
/// reference rows. Rows the proposal does not cover count as E_pro = 1.
/// Throws PipelineError("degenerate reference") when the area is zero.
ImageError fp_fn(const EdgePolyline& proposed, const EdgePolyline& reference);

/// Corpus means and category counts. Throws PipelineError for an empty list.
CorpusReport aggregate(std::span<const ImageError> errors);

}  // namespace aepm
