#include "aepm/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "aepm/error.hpp"

namespace aepm {

std::string_view bin_label(ErrorBin bin) {
    switch (bin) {
        case ErrorBin::BothBelow05: return "(FP,FN)<0.05";
        case ErrorBin::MinBelow05MaxBelow10: return "min(FP,FN)<0.05,max(FP,FN)<0.10";
        case ErrorBin::MinBelow05MaxAbove10: return "min(FP,FN)<0.05,max(FP,FN)>0.10";
        case ErrorBin::BothIn05To10: return "0.05<(FP,FN)<0.10";
        case ErrorBin::MinIn05To10MaxAbove10: return "0.05<min(FP,FN)<0.10,max(FP,FN)>0.10";
        case ErrorBin::BothAbove10: return "(FP,FN)>0.10";
    }
    return "?";
}

ErrorBin classify(double fp, double fn) {
    const double lo = std::min(fp, fn);
    const double hi = std::max(fp, fn);
    if (hi < 0.05) return ErrorBin::BothBelow05;
    if (lo < 0.05 && hi < 0.10) return ErrorBin::MinBelow05MaxBelow10;
    if (lo < 0.05 && hi > 0.10) return ErrorBin::MinBelow05MaxAbove10;
    if (lo > 0.05 && hi < 0.10) return ErrorBin::BothIn05To10;
    if (lo > 0.05 && lo < 0.10 && hi > 0.10) return ErrorBin::MinIn05To10MaxAbove10;
    return ErrorBin::BothAbove10;
}

double muscle_area(const EdgePolyline& reference) {
    if (reference.empty()) {
        throw PipelineError("muscle_area: empty reference edge");
    }
    double area = 0.0;
    for (const auto& p : reference) area += std::max(0.0, std::ceil(p.x) - 1.0);
    return area;
}

ImageError fp_fn(const EdgePolyline& proposed, const EdgePolyline& reference) {
    ImageError err;
    err.area = muscle_area(reference);
    if (err.area <= 0.0) {
        throw PipelineError("degenerate reference");
    }
    err.rows_compared = reference.size();
    double fp_sum = 0.0;
    double fn_sum = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        const double ref = reference[i].x;
        const double pro = i < proposed.size() ? proposed[i].x : 1.0;
        fp_sum += std::max(0.0, pro - ref);
        fn_sum += std::max(0.0, ref - pro);
    }
    err.fp = fp_sum / err.area;
    err.fn = fn_sum / err.area;
    return err;
}

CorpusReport aggregate(std::span<const ImageError> errors) {
    if (errors.empty()) {
        throw PipelineError("aggregate: no images");
    }
    CorpusReport report;
    report.n_images = errors.size();
    report.per_image.assign(errors.begin(), errors.end());
    double fp = 0.0;
    double fn = 0.0;
    for (const auto& e : errors) {
        fp += e.fp;
        fn += e.fn;
        ++report.bins[static_cast<std::size_t>(classify(e.fp, e.fn))];
    }
    report.fp_mean = fp / static_cast<double>(errors.size());
    report.fn_mean = fn / static_cast<double>(errors.size());
    return report;
}

}  // namespace aepm
