#include "cli/config.hpp"

#include "aepm/error.hpp"

namespace aepm::cli {

void validate(const RunConfig& config) {
    const auto& s = config.segment;
    if (s.beta_min > s.beta_max) throw DomainError("beta_min must not exceed beta_max");
    if (!(s.beta_step > 0.0)) throw DomainError("beta_step must be positive");
    if (!(s.alpha > 0.0)) throw DomainError("alpha must be positive");
    if (config.jobs < 1) throw DomainError("jobs must be at least 1");
    if (s.min_edge_rows < 8) throw DomainError("min_edge_rows must be at least 8");
    if (!(s.bspline_ctrl_divisor > 0.0)) throw DomainError("bspline_ctrl_divisor must be positive");
}

std::string_view to_string(MuMode mode) {
    return mode == MuMode::Clean ? "clean" : "per_beta";
}

std::string_view to_string(Orientation orientation) {
    switch (orientation) {
        case Orientation::Auto: return "auto";
        case Orientation::Keep: return "keep";
        case Orientation::Mirror: return "mirror";
    }
    return "auto";
}

std::string_view to_string(ReportFormat format) {
    return format == ReportFormat::Json ? "json" : "csv";
}

}  // namespace aepm::cli
