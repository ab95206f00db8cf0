#include "cli/report.hpp"

#include <cmath>
#include <cstdio>

namespace aepm::cli {

namespace {

Json nullable(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string flags_field(const Json& entry) {
    std::string out;
    if (!entry.contains("flags")) return out;
    for (const auto& [name, value] : entry["flags"].items()) {
        if (!value.is_boolean() || !value.get<bool>()) continue;
        if (!out.empty()) out += ';';
        out += name;
    }
    return out;
}

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

Json config_json(const RunConfig& config) {
    const auto& s = config.segment;
    return Json{
        {"alpha", s.alpha},
        {"beta_min", s.beta_min},
        {"beta_max", s.beta_max},
        {"beta_step", s.beta_step},
        {"edge_offset", s.edge_offset},
        {"min_edge_rows", s.min_edge_rows},
        {"bspline_ctrl_divisor", s.bspline_ctrl_divisor},
        {"mu_mode", std::string(to_string(s.mu_mode))},
        {"connectivity", static_cast<int>(s.connectivity)},
        {"orientation", std::string(to_string(s.orientation))},
    };
}

Json segment_meta(const std::string& id, const SegmentationResult& result, const Timings& timings) {
    Json per_beta = Json::array();
    for (const auto& c : result.per_beta) {
        per_beta.push_back({{"beta", c.beta},
                            {"score", c.degenerate ? Json(nullptr) : Json(c.score)},
                            {"edge_rows", c.smoothed.size()}});
    }
    return Json{
        {"id", id},
        {"status", result.diagnostics.edge_failure ? "edge_failure" : "ok"},
        {"width", result.clean.width()},
        {"height", result.clean.height()},
        {"threshold", {{"c", result.threshold.c}, {"bin", result.threshold.bin}}},
        {"objects_removed", result.objects_removed},
        {"mu", result.mu},
        {"beta_hat", nullable(result.beta_hat)},
        {"edge_rows", result.edge.size()},
        {"muscle_pixels", result.muscle_mask.count()},
        {"flags",
         {{"threshold_fallback", result.diagnostics.threshold_fallback},
          {"was_flipped", result.diagnostics.was_flipped},
          {"edge_failure", result.diagnostics.edge_failure}}},
        {"per_beta", std::move(per_beta)},
        {"timings",
         {{"read_ms", timings.read_ms}, {"segment_ms", timings.segment_ms}, {"write_ms", timings.write_ms}}},
    };
}

Json error_record(const std::string& id, const std::string& message) {
    return Json{{"id", id}, {"status", "error"}, {"error", message}};
}

Json image_error_json(const ImageError& error) {
    return Json{{"fp", error.fp},
                {"fn", error.fn},
                {"area", error.area},
                {"rows_compared", error.rows_compared},
                {"bin", std::string(bin_label(classify(error.fp, error.fn)))}};
}

Json strip_timings(const Json& report) {
    if (report.is_object()) {
        Json out = Json::object();
        for (const auto& [key, value] : report.items()) {
            if (key == "timings") continue;
            out[key] = strip_timings(value);
        }
        return out;
    }
    if (report.is_array()) {
        Json out = Json::array();
        for (const auto& v : report) out.push_back(strip_timings(v));
        return out;
    }
    return report;
}

std::string entries_csv(const Json& entries) {
    std::string out = "id,fp,fn,bin,beta_hat,flags\n";
    for (const auto& e : entries) {
        out += e.value("id", std::string());
        out += ',';
        if (e.contains("evaluation")) {
            const auto& ev = e["evaluation"];
            out += fixed(ev["fp"].get<double>()) + ',' + fixed(ev["fn"].get<double>()) + ',' +
                   '"' + ev["bin"].get<std::string>() + '"';
        } else {
            out += ",,";
        }
        out += ',';
        if (e.contains("beta_hat") && e["beta_hat"].is_number()) out += fixed(e["beta_hat"].get<double>());
        out += ',';
        std::string flags = flags_field(e);
        if (e.value("status", std::string()) == "error") flags = flags.empty() ? "error" : flags + ";error";
        out += flags;
        out += '\n';
    }
    return out;
}

std::string evaluation_table(const CorpusReport& report) {
    std::string out;
    char buf[160];
    std::snprintf(buf, sizeof buf, "images evaluated: %zu\n", report.n_images);
    out += buf;
    std::snprintf(buf, sizeof buf, "%-40s %10.4f\n", "FP_m", report.fp_mean);
    out += buf;
    std::snprintf(buf, sizeof buf, "%-40s %10.4f\n", "FN_m", report.fn_mean);
    out += buf;
    for (std::size_t b = 0; b < kErrorBinCount; ++b) {
        std::snprintf(buf, sizeof buf, "%-40s %10zu\n", std::string(bin_label(static_cast<ErrorBin>(b))).c_str(),
                      report.bins[b]);
        out += buf;
    }
    return out;
}

Json corpus_json(const CorpusReport& report, const std::vector<std::string>& ids) {
    Json per_image = Json::array();
    for (std::size_t i = 0; i < report.per_image.size(); ++i) {
        Json e = image_error_json(report.per_image[i]);
        e["id"] = i < ids.size() ? ids[i] : std::string();
        per_image.push_back(std::move(e));
    }
    Json bins = Json::object();
    for (std::size_t b = 0; b < kErrorBinCount; ++b) {
        bins[std::string(bin_label(static_cast<ErrorBin>(b)))] = report.bins[b];
    }
    return Json{{"summary",
                 {{"n_images", report.n_images},
                  {"fp_mean", report.fp_mean},
                  {"fn_mean", report.fn_mean},
                  {"bins", std::move(bins)}}},
                {"per_image", std::move(per_image)}};
}

}  // namespace aepm::cli
