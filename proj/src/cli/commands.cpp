#include "cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <omp.h>

#include "aepm/error.hpp"
#include "aepm/image_io.hpp"
#include "aepm/kernels.hpp"
#include "cli/report.hpp"

namespace aepm::cli {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

bool ends_with(const std::string& s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

void write_text(const fs::path& path, const std::string& text) {
    write_file_bytes(path, std::span(reinterpret_cast<const unsigned char*>(text.data()), text.size()));
}

GrayImage mask_image(const BinaryMask& mask) {
    GrayImage img(mask.width(), mask.height());
    auto dst = img.pixels();
    const auto src = mask.bits();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] ? 1.0 : 0.0;
    return img;
}

GrayImage overlay_image(const GrayImage& oriented_input, const EdgePolyline& edge) {
    GrayImage out = oriented_input;
    for (const auto& p : edge) {
        const long xi = std::lround(p.x);
        if (xi < 1 || static_cast<std::size_t>(xi) > out.width() || p.y < 1 || p.y > out.height()) continue;
        out(static_cast<std::size_t>(xi - 1), p.y - 1) = 1.0;
    }
    return out;
}

// Runs the pipeline on one file and writes its artifacts. Read failures throw
// aepm::ParseError / aepm::Error before anything is written; pipeline errors
// are returned as an error record.
Json process_image(const fs::path& path, const Segmenter& segmenter, const RunConfig& config) {
    const std::string id = file_stem(path);
    Timings timings;

    auto t0 = Clock::now();
    const GrayImage input = load_pgm(path);
    timings.read_ms = ms_since(t0);

    t0 = Clock::now();
    SegmentationResult result;
    try {
        result = segmenter.run(input);
    } catch (const PipelineError& e) {
        return error_record(id, e.what());
    } catch (const DomainError& e) {
        return error_record(id, e.what());
    }
    timings.segment_ms = ms_since(t0);

    t0 = Clock::now();
    const bool flipped = result.diagnostics.was_flipped;
    auto restore = [flipped](const GrayImage& img) { return flipped ? mirror_horizontal(img) : img; };
    const fs::path base = config.out_dir / id;
    save_pgm(base.string() + ".seg.pgm", restore(result.segmented));
    save_pgm(base.string() + ".mask.pgm", restore(mask_image(result.muscle_mask)));
    save_edge_csv(base.string() + ".edge.csv", result.edge);
    if (config.overlay) {
        const GrayImage oriented = flipped ? mirror_horizontal(input) : input;
        save_pgm(base.string() + ".overlay.pgm", restore(overlay_image(oriented, result.edge)));
    }
    timings.write_ms = ms_since(t0);

    Json meta = segment_meta(id, result, timings);
    write_text(base.string() + ".meta.json", meta.dump(2) + "\n");
    return meta;
}

std::vector<fs::path> list_files(const fs::path& dir, std::string_view suffix) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        if (ends_with(lower(entry.path().filename().string()), suffix)) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
    return files;
}

std::map<std::string, fs::path> edge_files_by_stem(const fs::path& dir) {
    std::map<std::string, fs::path> out;
    for (const auto& p : list_files(dir, ".csv")) out.emplace(file_stem(p), p);
    return out;
}

double quantile(std::vector<double> sorted, double q) {
    std::sort(sorted.begin(), sorted.end());
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    return sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - static_cast<double>(lo));
}

}  // namespace

std::string file_stem(const fs::path& path) {
    const std::string name = path.filename().string();
    const std::string low = lower(name);
    for (std::string_view suffix : {".edge.csv", ".truth.csv", ".csv", ".pgm"}) {
        if (ends_with(low, suffix)) return name.substr(0, name.size() - suffix.size());
    }
    return path.stem().string();
}

int cmd_segment(const fs::path& image, const RunConfig& config, std::ostream& err) {
    try {
        validate(config);
        set_thread_count(config.jobs);
        fs::create_directories(config.out_dir);
        const Segmenter segmenter(config.segment);
        const Json meta = process_image(image, segmenter, config);
        if (meta.value("status", std::string()) == "error") {
            write_text((config.out_dir / file_stem(image)).string() + ".meta.json", meta.dump(2) + "\n");
            err << "segment: " << image.string() << ": " << meta["error"].get<std::string>() << "\n";
        }
        return kExitOk;
    } catch (const std::exception& e) {
        err << "segment: " << e.what() << "\n";
        return kExitUsage;
    }
}

int cmd_batch(const fs::path& dir, const RunConfig& config, const std::optional<fs::path>& reference_dir,
              std::ostream& out, std::ostream& err) {
    const auto start = Clock::now();
    std::vector<fs::path> images;
    std::map<std::string, fs::path> references;
    try {
        validate(config);
        if (!fs::is_directory(dir)) throw Error("not a directory: " + dir.string());
        images = list_files(dir, ".pgm");
        if (reference_dir) references = edge_files_by_stem(*reference_dir);
        fs::create_directories(config.out_dir);
    } catch (const std::exception& e) {
        err << "batch: " << e.what() << "\n";
        return kExitUsage;
    }

    set_thread_count(config.jobs);
    const Segmenter segmenter(config.segment);
    std::vector<Json> entries(images.size());
    const auto count = static_cast<std::ptrdiff_t>(images.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(config.jobs) if (config.jobs > 1)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const std::string id = file_stem(images[k]);
        Json entry;
        try {
            entry = process_image(images[k], segmenter, config);
        } catch (const std::exception& e) {
            entry = error_record(id, e.what());
        }
        if (const auto ref = references.find(id); ref != references.end() && entry["status"] != "error") {
            try {
                const EdgePolyline proposed = load_edge_csv((config.out_dir / id).string() + ".edge.csv");
                entry["evaluation"] = image_error_json(fp_fn(proposed, load_edge_csv(ref->second)));
            } catch (const std::exception& e) {
                entry["evaluation_error"] = e.what();
            }
        }
        entries[k] = std::move(entry);
    }

    std::size_t ok = 0, failed = 0, errors = 0;
    std::vector<ImageError> evaluated;
    std::vector<std::string> evaluated_ids;
    Json list = Json::array();
    for (auto& e : entries) {
        const auto status = e["status"].get<std::string>();
        if (status == "ok") ++ok; else if (status == "edge_failure") ++failed; else ++errors;
        if (e.contains("evaluation")) {
            const auto& ev = e["evaluation"];
            evaluated.push_back({ev["fp"].get<double>(), ev["fn"].get<double>(), ev["area"].get<double>(),
                                 ev["rows_compared"].get<std::size_t>()});
            evaluated_ids.push_back(e["id"].get<std::string>());
        }
        list.push_back(std::move(e));
    }

    Json report{{"command", "batch"},
                {"config", config_json(config)},
                {"summary",
                 {{"n_images", images.size()}, {"ok", ok}, {"edge_failure", failed}, {"error", errors}}}};
    if (!evaluated.empty()) {
        report["evaluation"] = corpus_json(aggregate(evaluated), evaluated_ids)["summary"];
    }
    report["entries"] = list;
    report["timings"] = {{"total_ms", ms_since(start)}};

    try {
        if (config.report == ReportFormat::Json) {
            write_text(config.out_dir / "report.json", report.dump(2) + "\n");
        } else {
            write_text(config.out_dir / "report.csv", entries_csv(report["entries"]));
        }
    } catch (const std::exception& e) {
        err << "batch: " << e.what() << "\n";
        return kExitUsage;
    }
    out << "batch: " << images.size() << " images, " << ok << " ok, " << failed << " edge failures, " << errors
        << " errors\n";
    return kExitOk;
}

int cmd_evaluate(const fs::path& proposed_dir, const fs::path& reference_dir, const RunConfig& config,
                 std::ostream& out, std::ostream& err) {
    try {
        const auto proposed = edge_files_by_stem(proposed_dir);
        const auto reference = edge_files_by_stem(reference_dir);

        std::vector<ImageError> errors;
        std::vector<std::string> ids;
        Json entries = Json::array();
        for (const auto& [stem, ref_path] : reference) {
            const auto pro = proposed.find(stem);
            if (pro == proposed.end()) {
                err << "evaluate: warning: no proposed edge for " << stem << ", skipped\n";
                continue;
            }
            try {
                const ImageError e = fp_fn(load_edge_csv(pro->second), load_edge_csv(ref_path));
                errors.push_back(e);
                ids.push_back(stem);
                Json entry{{"id", stem}};
                entry["evaluation"] = image_error_json(e);
                const fs::path meta_path = proposed_dir / (stem + ".meta.json");
                if (fs::exists(meta_path)) {
                    const auto bytes = read_file_bytes(meta_path);
                    const Json meta = Json::parse(bytes.begin(), bytes.end());
                    if (meta.contains("beta_hat")) entry["beta_hat"] = meta["beta_hat"];
                    if (meta.contains("flags")) entry["flags"] = meta["flags"];
                }
                entries.push_back(std::move(entry));
            } catch (const std::exception& e) {
                err << "evaluate: warning: " << stem << ": " << e.what() << ", skipped\n";
            }
        }
        for (const auto& [stem, path] : proposed) {
            if (!reference.count(stem)) err << "evaluate: warning: no reference edge for " << stem << ", skipped\n";
        }
        if (errors.empty()) {
            err << "evaluate: no comparable pairs\n";
            return kExitUsage;
        }

        const CorpusReport report = aggregate(errors);
        fs::create_directories(config.out_dir);
        write_text(config.out_dir / "evaluation.json", corpus_json(report, ids).dump(2) + "\n");
        const std::string table = evaluation_table(report);
        write_text(config.out_dir / "evaluation.txt", table);
        if (config.report == ReportFormat::Csv) {
            write_text(config.out_dir / "evaluation.csv", entries_csv(entries));
        }
        out << table;
        return kExitOk;
    } catch (const std::exception& e) {
        err << "evaluate: " << e.what() << "\n";
        return kExitUsage;
    }
}

int cmd_phantom(const PhantomSpec& spec, const fs::path& image_out, const std::optional<fs::path>& truth_out,
                std::ostream& err) {
    try {
        const Phantom ph = generate_phantom(spec);
        save_pgm(image_out, ph.image);
        if (truth_out) save_edge_csv(*truth_out, ph.truth);
        return kExitOk;
    } catch (const std::exception& e) {
        err << "phantom: " << e.what() << "\n";
        return kExitUsage;
    }
}

BenchReport run_bench(const std::vector<std::size_t>& sizes, std::size_t reps, const RunConfig& config) {
    if (reps < 3) throw DomainError("at least 3 repetitions required");
    if (sizes.empty()) throw DomainError("no sizes given");
    validate(config);
    set_thread_count(config.jobs);
    const Segmenter segmenter(config.segment);

    BenchReport report;
    for (std::size_t n : sizes) {
        PhantomSpec spec;
        spec.size = n;
        const GrayImage img = generate_phantom(spec).image;
        BenchRow row;
        row.size = n;
        segmenter.run(img);  // warm-up
        for (std::size_t r = 0; r < reps; ++r) {
            const auto t0 = Clock::now();
            const auto result = segmenter.run(img);
            row.samples_ms.push_back(ms_since(t0));
        }
        row.median_ms = quantile(row.samples_ms, 0.5);
        row.q1_ms = quantile(row.samples_ms, 0.25);
        row.q3_ms = quantile(row.samples_ms, 0.75);
        report.rows.push_back(std::move(row));
    }

    if (report.rows.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double m = static_cast<double>(report.rows.size());
        for (const auto& row : report.rows) {
            const double x = std::log(static_cast<double>(row.size));
            const double y = std::log(row.median_ms);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
        }
        const double denom = m * sxx - sx * sx;
        if (denom > 0.0) report.slope = (m * sxy - sx * sy) / denom;
    }
    return report;
}

int cmd_bench(const std::vector<std::size_t>& sizes, std::size_t reps, const RunConfig& config, std::ostream& out,
              std::ostream& err) {
    BenchReport report;
    try {
        report = run_bench(sizes, reps, config);
    } catch (const std::exception& e) {
        err << "bench: " << e.what() << "\n";
        return kExitUsage;
    }
    char buf[128];
    out << "    size   median_ms       q1_ms       q3_ms\n";
    Json rows = Json::array();
    for (const auto& row : report.rows) {
        std::snprintf(buf, sizeof buf, "%8zu %11.3f %11.3f %11.3f\n", row.size, row.median_ms, row.q1_ms, row.q3_ms);
        out << buf;
        rows.push_back({{"size", row.size},
                        {"timings", {{"median_ms", row.median_ms}, {"q1_ms", row.q1_ms}, {"q3_ms", row.q3_ms},
                                     {"samples_ms", row.samples_ms}}}});
    }
    Json doc{{"command", "bench"}, {"reps", reps}, {"jobs", config.jobs}, {"rows", rows}};
    if (report.slope) {
        std::snprintf(buf, sizeof buf, "log-log slope: %.3f\n", *report.slope);
        out << buf;
        doc["slope"] = *report.slope;
    }
    try {
        fs::create_directories(config.out_dir);
        write_text(config.out_dir / "bench.json", doc.dump(2) + "\n");
    } catch (const std::exception& e) {
        err << "bench: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Pectoral muscle removal for MLO mammograms"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "INI file of key = value defaults; flags win");

    RunConfig config;
    auto& seg = config.segment;
    std::string report_format = "json";
    std::string mu_mode = "clean";
    std::string orientation = "auto";
    int connectivity = 8;
    std::string out_dir = ".";

    app.add_option("--jobs", config.jobs, "Worker threads")->envname("AEPM_JOBS")->check(CLI::PositiveNumber);
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--report", report_format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--alpha", seg.alpha, "Beta transform alpha")->capture_default_str();
    app.add_option("--beta-min,--beta_min", seg.beta_min, "Smallest beta tried")->capture_default_str();
    app.add_option("--beta-max,--beta_max", seg.beta_max, "Largest beta tried")->capture_default_str();
    app.add_option("--beta-step,--beta_step", seg.beta_step, "Beta grid spacing")->capture_default_str();
    app.add_option("--edge-offset,--edge_offset", seg.edge_offset, "Contrast sampling offset (px)")
        ->capture_default_str();
    app.add_option("--min-edge-rows,--min_edge_rows", seg.min_edge_rows, "Shortest usable rough edge")
        ->capture_default_str();
    app.add_option("--bspline-ctrl-divisor,--bspline_ctrl_divisor", seg.bspline_ctrl_divisor,
                   "Edge rows per extra spline control point")
        ->capture_default_str();
    app.add_option("--mu-mode,--mu_mode", mu_mode, "Mean used by the rough-edge scan")
        ->check(CLI::IsMember({"clean", "per_beta"}));
    app.add_option("--connectivity", connectivity, "Component connectivity")->check(CLI::IsMember({4, 8}));
    app.add_option("--orientation", orientation, "auto: mirror when the breast is on the right")
        ->check(CLI::IsMember({"auto", "keep", "mirror"}));
    app.add_flag("--overlay", config.overlay, "Also write <stem>.overlay.pgm");

    std::string image_path;
    auto* segment = app.add_subcommand("segment", "Segment one image");
    segment->add_option("image", image_path, "Input PGM")->required();

    std::string batch_dir;
    std::string reference_dir;
    auto* batch = app.add_subcommand("batch", "Segment every PGM in a directory");
    batch->add_option("dir", batch_dir, "Directory of PGM files")->required();
    batch->add_option("--reference", reference_dir, "Directory of reference edge CSVs");

    std::string proposed_dir;
    std::string eval_reference_dir;
    auto* evaluate = app.add_subcommand("evaluate", "Area-normalized FP/FN of proposed vs reference edges");
    evaluate->add_option("proposed", proposed_dir, "Directory of proposed edge CSVs")->required();
    evaluate->add_option("reference", eval_reference_dir, "Directory of reference edge CSVs")->required();

    PhantomSpec pspec;
    std::string phantom_out;
    std::string truth_out;
    auto* phantom = app.add_subcommand("phantom", "Generate a synthetic mammogram");
    phantom->add_option("--size", pspec.size)->capture_default_str();
    phantom->add_option("--noise", pspec.noise_sigma)->capture_default_str();
    phantom->add_option("--labels", pspec.n_labels)->capture_default_str();
    phantom->add_option("--seed", pspec.seed)->capture_default_str();
    phantom->add_option("--muscle", pspec.muscle_intensity)->capture_default_str();
    phantom->add_option("--tissue", pspec.tissue_intensity)->capture_default_str();
    phantom->add_option("--base-width", pspec.muscle_base_width)->capture_default_str();
    phantom->add_option("--muscle-height", pspec.muscle_height)->capture_default_str();
    phantom->add_option("--curvature", pspec.edge_curvature)->capture_default_str();
    phantom->add_option("-o,--output", phantom_out, "Output PGM")->required();
    phantom->add_option("--truth-out", truth_out, "Ground-truth edge CSV");

    std::vector<std::size_t> sizes{128, 256, 512, 1024};
    std::size_t reps = 10;
    auto* bench = app.add_subcommand("bench", "Runtime scaling of the pipeline");
    bench->add_option("--sizes", sizes, "Comma-separated image sizes")->delimiter(',')->capture_default_str();
    bench->add_option("--reps", reps, "Repetitions per size (>= 3)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    config.out_dir = out_dir;
    config.report = report_format == "csv" ? ReportFormat::Csv : ReportFormat::Json;
    seg.mu_mode = mu_mode == "per_beta" ? MuMode::PerBeta : MuMode::Clean;
    seg.connectivity = connectivity == 4 ? Connectivity::Four : Connectivity::Eight;
    seg.orientation = orientation == "keep" ? Orientation::Keep
                      : orientation == "mirror" ? Orientation::Mirror
                                                : Orientation::Auto;
    try {
        validate(config);
    } catch (const std::exception& e) {
        err << "aepm: " << e.what() << "\n";
        return kExitUsage;
    }

    if (*segment) return cmd_segment(image_path, config, err);
    if (*batch) {
        std::optional<fs::path> ref;
        if (!reference_dir.empty()) ref = reference_dir;
        return cmd_batch(batch_dir, config, ref, out, err);
    }
    if (*evaluate) return cmd_evaluate(proposed_dir, eval_reference_dir, config, out, err);
    if (*phantom) {
        std::optional<fs::path> truth;
        if (!truth_out.empty()) truth = truth_out;
        return cmd_phantom(pspec, phantom_out, truth, err);
    }
    if (*bench) return cmd_bench(sizes, reps, config, out, err);
    return kExitUsage;
}

}  // namespace aepm::cli
