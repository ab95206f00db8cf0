#include "aepm/image_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <string>

#include "aepm/error.hpp"

namespace aepm {

namespace {

bool is_space(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

// Cursor over PGM bytes: header tokens are separated by whitespace and may be
// interleaved with '#' comments running to end of line.
class PgmCursor {
public:
    explicit PgmCursor(std::span<const unsigned char> bytes) : bytes_(bytes) {}

    std::size_t offset() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (is_space(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::uint64_t read_uint(const char* field) {
        skip_space_and_comments();
        const std::size_t start = pos_;
        std::uint64_t value = 0;
        while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > 0xFFFFFFFFull) {
                throw ParseError(std::string("PGM: ") + field + " too large at byte " +
                                     std::to_string(start),
                                 start);
            }
            ++pos_;
        }
        if (pos_ == start) {
            throw ParseError(std::string("PGM: expected ") + field + " at byte " +
                                 std::to_string(start),
                             start);
        }
        return value;
    }

    unsigned char byte_at(std::size_t i) const { return bytes_[i]; }
    void advance(std::size_t n) { pos_ += n; }

private:
    std::span<const unsigned char> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

GrayImage read_pgm(std::span<const unsigned char> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '2')) {
        throw ParseError("PGM: bad magic number at byte 0 (expected P5 or P2)", 0);
    }
    const bool binary = bytes[1] == '5';
    PgmCursor cur(bytes);
    cur.advance(2);

    const std::size_t width_at = cur.offset();
    const auto width = cur.read_uint("width");
    const auto height = cur.read_uint("height");
    if (width == 0 || height == 0) {
        throw ParseError("PGM: zero dimension at byte " + std::to_string(width_at), width_at);
    }
    const std::size_t maxval_at = cur.offset();
    const auto maxval = cur.read_uint("max value");
    if (maxval == 0 || maxval > 65535) {
        throw ParseError("PGM: max value " + std::to_string(maxval) + " out of range (1..65535) at byte " +
                             std::to_string(maxval_at),
                         maxval_at);
    }

    const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    std::vector<double> pixels(count);
    const double maxv = static_cast<double>(maxval);

    if (binary) {
        // Exactly one whitespace byte separates the header from the raster.
        if (cur.remaining() == 0 || !is_space(cur.byte_at(cur.offset()))) {
            throw ParseError("PGM: missing whitespace after header at byte " +
                                 std::to_string(cur.offset()),
                             cur.offset());
        }
        cur.advance(1);
        const std::size_t bytes_per_sample = maxval > 255 ? 2 : 1;
        const std::size_t needed = count * bytes_per_sample;
        if (cur.remaining() < needed) {
            throw ParseError("PGM: truncated pixel data at byte " + std::to_string(bytes.size()) +
                                 " (need " + std::to_string(needed) + " bytes from byte " +
                                 std::to_string(cur.offset()) + ")",
                             bytes.size());
        }
        const std::size_t base = cur.offset();
        for (std::size_t i = 0; i < count; ++i) {
            std::uint32_t s = 0;
            if (bytes_per_sample == 1) {
                s = bytes[base + i];
            } else {
                s = (static_cast<std::uint32_t>(bytes[base + 2 * i]) << 8) | bytes[base + 2 * i + 1];
            }
            if (s > maxval) {
                const std::size_t at = base + i * bytes_per_sample;
                throw ParseError("PGM: sample exceeds max value at byte " + std::to_string(at), at);
            }
            pixels[i] = s / maxv;
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            cur.skip_space_and_comments();
            if (cur.remaining() == 0) {
                throw ParseError("PGM: truncated pixel data at byte " + std::to_string(cur.offset()),
                                 cur.offset());
            }
            const std::size_t at = cur.offset();
            const auto s = cur.read_uint("sample");
            if (s > maxval) {
                throw ParseError("PGM: sample exceeds max value at byte " + std::to_string(at), at);
            }
            pixels[i] = static_cast<double>(s) / maxv;
        }
    }
    return GrayImage(width, height, std::move(pixels), static_cast<std::uint32_t>(maxval));
}

std::vector<unsigned char> write_pgm(const GrayImage& img) {
    const std::string header =
        "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
    std::vector<unsigned char> out(header.begin(), header.end());
    out.reserve(header.size() + img.size());
    for (double v : img.pixels()) {
        out.push_back(static_cast<unsigned char>(quantize_level(v)));
    }
    return out;
}

std::vector<unsigned char> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    return std::vector<unsigned char>(std::istreambuf_iterator<char>(in), {});
}

void write_file_bytes(const std::filesystem::path& path, std::span<const unsigned char> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error("write failed for " + path.string());
    }
}

GrayImage load_pgm(const std::filesystem::path& path) {
    const auto bytes = read_file_bytes(path);
    return read_pgm(bytes);
}

void save_pgm(const std::filesystem::path& path, const GrayImage& img) {
    write_file_bytes(path, write_pgm(img));
}

GrayImage mirror_horizontal(const GrayImage& img) {
    GrayImage out(img.width(), img.height(), 0.0, img.source_max_value());
    const std::size_t w = img.width();
    for (std::size_t r = 0; r < img.height(); ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            out(c, r) = img(w - 1 - c, r);
        }
    }
    return out;
}

std::pair<GrayImage, bool> normalize_orientation(const GrayImage& img) {
    const std::size_t w = img.width();
    const std::size_t half = w / 2;
    double left = 0.0;
    double right = 0.0;
    for (std::size_t r = 0; r < img.height(); ++r) {
        const auto row = img.row(r);
        for (std::size_t c = 0; c < half; ++c) {
            left += row[c];
            right += row[w - 1 - c];
        }
    }
    if (right > left) {
        return {mirror_horizontal(img), true};
    }
    return {img, false};
}

EdgePolyline read_edge_csv(std::string_view text) {
    EdgePolyline edge;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool header_seen = false;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        if (!header_seen) {
            if (line != "y,x") {
                throw ParseError("edge CSV: expected header \"y,x\" at line 1", 1);
            }
            header_seen = true;
            continue;
        }
        if (line.empty()) {
            if (pos >= text.size()) break;
            throw ParseError("edge CSV: empty row at line " + std::to_string(line_no), line_no);
        }

        const auto comma = line.find(',');
        if (comma == std::string_view::npos) {
            throw ParseError("edge CSV: missing column at line " + std::to_string(line_no), line_no);
        }
        const std::string_view ys = line.substr(0, comma);
        const std::string_view xs = line.substr(comma + 1);

        std::size_t y = 0;
        auto [yp, yec] = std::from_chars(ys.data(), ys.data() + ys.size(), y);
        if (yec != std::errc() || yp != ys.data() + ys.size()) {
            throw ParseError("edge CSV: bad row index at line " + std::to_string(line_no), line_no);
        }
        double x = 0.0;
        auto [xp, xec] = std::from_chars(xs.data(), xs.data() + xs.size(), x);
        if (xec != std::errc() || xp != xs.data() + xs.size() || !std::isfinite(x)) {
            throw ParseError("edge CSV: bad column value at line " + std::to_string(line_no), line_no);
        }

        const std::size_t expected = edge.size() + 1;
        if (!edge.empty() && y == edge.back().y) {
            throw ParseError("duplicate row index at line " + std::to_string(line_no), line_no);
        }
        if (y != expected) {
            throw ParseError("non-contiguous row index at line " + std::to_string(line_no), line_no);
        }
        if (x < 1.0 || x > 1e6) {
            throw ParseError("column value out of range [1, 1e6] at line " + std::to_string(line_no),
                             line_no);
        }
        edge.push_back({x, y});
    }
    if (!header_seen) {
        throw ParseError("edge CSV: expected header \"y,x\" at line 1", 1);
    }
    return edge;
}

std::string write_edge_csv(const EdgePolyline& edge) {
    std::string out = "y,x\n";
    char buf[64];
    for (const auto& p : edge) {
        const int n = std::snprintf(buf, sizeof buf, "%zu,%.6f\n", p.y, p.x);
        out.append(buf, static_cast<std::size_t>(n));
    }
    return out;
}

EdgePolyline load_edge_csv(const std::filesystem::path& path) {
    const auto bytes = read_file_bytes(path);
    return read_edge_csv(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

void save_edge_csv(const std::filesystem::path& path, const EdgePolyline& edge) {
    const std::string text = write_edge_csv(edge);
    write_file_bytes(path, std::span(reinterpret_cast<const unsigned char*>(text.data()), text.size()));
}

}  // namespace aepm
