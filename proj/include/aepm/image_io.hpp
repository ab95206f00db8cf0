#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aepm/image.hpp"

namespace aepm {

/// Decodes a binary (P5) or ASCII (P2) PGM. Samples are divided by the
/// header's max value; 16-bit P5 samples are big-endian.
GrayImage read_pgm(std::span<const unsigned char> bytes);

/// Encodes as binary P5 with max value 255, sample = round-half-up(v * 255).
std::vector<unsigned char> write_pgm(const GrayImage& img);

GrayImage load_pgm(const std::filesystem::path& path);
void save_pgm(const std::filesystem::path& path, const GrayImage& img);

/// Column reversal: x -> width + 1 - x.
GrayImage mirror_horizontal(const GrayImage& img);

/// Mirrors the image when the right half of the columns carries strictly more
/// intensity than the left half, so the breast sits on the left and the
/// muscle at the top-left. For odd widths the middle column is ignored.
std::pair<GrayImage, bool> normalize_orientation(const GrayImage& img);

/// Edge CSV: header "y,x", one row per edge row, y contiguous from 1.
EdgePolyline read_edge_csv(std::string_view text);
std::string write_edge_csv(const EdgePolyline& edge);

EdgePolyline load_edge_csv(const std::filesystem::path& path);
void save_edge_csv(const std::filesystem::path& path, const EdgePolyline& edge);

std::vector<unsigned char> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const unsigned char> bytes);

}  // namespace aepm
