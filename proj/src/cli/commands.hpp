#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "aepm/phantom.hpp"
#include "cli/config.hpp"

namespace aepm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;

/// Writes <stem>.seg.pgm, <stem>.mask.pgm, <stem>.edge.csv, <stem>.meta.json
/// and optionally <stem>.overlay.pgm into config.out_dir. Images are written
/// in the input's orientation; the edge is in muscle-top-left coordinates.
int cmd_segment(const std::filesystem::path& image, const RunConfig& config, std::ostream& err);

/// Segments every .pgm in `dir` (sorted by name) and writes a corpus report.
/// When `reference_dir` is given, entries with a matching reference edge get
/// an FP/FN evaluation.
int cmd_batch(const std::filesystem::path& dir, const RunConfig& config,
              const std::optional<std::filesystem::path>& reference_dir, std::ostream& out,
              std::ostream& err);

/// Compares edge CSVs matched by stem and writes evaluation.json (plus
/// evaluation.csv for --report csv); prints the summary table.
int cmd_evaluate(const std::filesystem::path& proposed_dir, const std::filesystem::path& reference_dir,
                 const RunConfig& config, std::ostream& out, std::ostream& err);

int cmd_phantom(const PhantomSpec& spec, const std::filesystem::path& image_out,
                const std::optional<std::filesystem::path>& truth_out, std::ostream& err);

struct BenchRow {
    std::size_t size = 0;
    double median_ms = 0.0;
    double q1_ms = 0.0;
    double q3_ms = 0.0;
    std::vector<double> samples_ms;
};

struct BenchReport {
    std::vector<BenchRow> rows;
    std::optional<double> slope;  // log(median time) vs log(size), least squares
};

/// Times the full pipeline on a phantom of each size. Throws DomainError for
/// reps < 3 or an empty size list.
BenchReport run_bench(const std::vector<std::size_t>& sizes, std::size_t reps, const RunConfig& config);

int cmd_bench(const std::vector<std::size_t>& sizes, std::size_t reps, const RunConfig& config,
              std::ostream& out, std::ostream& err);

/// Stem used to match edge files: the filename minus ".edge.csv",
/// ".truth.csv" or ".csv", or an image filename minus ".pgm".
std::string file_stem(const std::filesystem::path& path);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace aepm::cli
