#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "aepm/edge_detect.hpp"
#include "aepm/metrics.hpp"
#include "cli/config.hpp"

namespace aepm::cli {

using Json = nlohmann::ordered_json;

struct Timings {
    double read_ms = 0.0;
    double segment_ms = 0.0;
    double write_ms = 0.0;
};

Json config_json(const RunConfig& config);

/// Per-image record written to <stem>.meta.json and embedded in batch reports.
Json segment_meta(const std::string& id, const SegmentationResult& result, const Timings& timings);

Json error_record(const std::string& id, const std::string& message);

Json image_error_json(const ImageError& error);

/// Drops every "timings" member, recursively. Whatever remains is a pure
/// function of the inputs and configuration.
Json strip_timings(const Json& report);

/// "id,fp,fn,bin,beta_hat,flags" rows; fp/fn/bin are empty when the entry
/// has no evaluation.
std::string entries_csv(const Json& entries);

/// Human-readable summary with one line per error category.
std::string evaluation_table(const CorpusReport& report);

Json corpus_json(const CorpusReport& report, const std::vector<std::string>& ids);

}  // namespace aepm::cli
