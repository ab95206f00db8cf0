#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "aepm/edge_detect.hpp"

namespace aepm::cli {

enum class ReportFormat { Json, Csv };

struct RunConfig {
    SegmentConfig segment;
    std::filesystem::path out_dir = ".";
    ReportFormat report = ReportFormat::Json;
    int jobs = 1;
    bool overlay = false;
};

/// Throws DomainError when beta_min > beta_max, beta_step <= 0 or jobs < 1.
void validate(const RunConfig& config);

std::string_view to_string(MuMode mode);
std::string_view to_string(Orientation orientation);
std::string_view to_string(ReportFormat format);

}  // namespace aepm::cli
