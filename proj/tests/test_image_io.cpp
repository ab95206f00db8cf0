#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "aepm/error.hpp"
#include "aepm/image_io.hpp"
#include "oracles.hpp"

using namespace aepm;

namespace {

std::vector<unsigned char> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

std::vector<unsigned char> p5(std::size_t w, std::size_t h, const std::vector<unsigned char>& samples,
                              int maxval = 255) {
    auto out = bytes_of("P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n" + std::to_string(maxval) + "\n");
    out.insert(out.end(), samples.begin(), samples.end());
    return out;
}

}  // namespace

TEST_CASE("read_pgm decodes ASCII samples normalized by max value") {
    const auto img = read_pgm(bytes_of("P2 2 2 255 0 128 255 64"));
    REQUIRE(img.width() == 2);
    REQUIRE(img.height() == 2);
    CHECK(img(0, 0) == 0.0);
    CHECK(img(1, 0) == 128.0 / 255.0);
    CHECK(img(0, 1) == 1.0);
    CHECK(img(1, 1) == 64.0 / 255.0);
    CHECK(img.source_max_value() == 255);
}

TEST_CASE("read_pgm skips header comments") {
    const auto img = read_pgm(bytes_of("P2\n# made by hand\n2 1\n# max\n10\n5 10\n"));
    CHECK(img(0, 0) == 0.5);
    CHECK(img(1, 0) == 1.0);
    CHECK(img.source_max_value() == 10);
}

TEST_CASE("read_pgm maps samples equal to max value to exactly 1") {
    const auto img = read_pgm(p5(3, 2, std::vector<unsigned char>(6, 200), 200));
    for (double v : img.pixels()) CHECK(v == 1.0);
}

TEST_CASE("read_pgm reads 16-bit big-endian samples") {
    const auto img = read_pgm(p5(2, 1, {0x01, 0x00, 0xFF, 0xFF}, 65535));
    CHECK(img(0, 0) == doctest::Approx(256.0 / 65535.0));
    CHECK(img(1, 0) == 1.0);
}

TEST_CASE("read_pgm errors name the byte offset") {
    auto offset_of = [](const std::vector<unsigned char>& b) {
        try {
            read_pgm(b);
        } catch (const ParseError& e) {
            return static_cast<long>(e.position());
        }
        return -1L;
    };
    CHECK(offset_of(bytes_of("P6 1 1 255 x")) == 0);
    CHECK(offset_of(bytes_of("")) == 0);
    CHECK_THROWS_AS(read_pgm(bytes_of("P5\n0 4\n255\n")), ParseError);
    CHECK_THROWS_AS(read_pgm(bytes_of("P5\n2 2\n0\n....")), ParseError);
    CHECK_THROWS_AS(read_pgm(bytes_of("P5\n2 2\n70000\n....")), ParseError);
    const auto truncated = p5(4, 4, std::vector<unsigned char>(10, 1));
    CHECK(offset_of(truncated) == static_cast<long>(truncated.size()));
    CHECK_THROWS_WITH_AS(read_pgm(bytes_of("P2 2 2 255 1 2 3")), doctest::Contains("truncated"), ParseError);
    CHECK_THROWS_AS(read_pgm(bytes_of("P2 1 1 10 11")), ParseError);
}

TEST_CASE("read_pgm consumes exactly width x height samples") {
    auto b = p5(3, 3, std::vector<unsigned char>(9, 7));
    b.push_back(99);  // trailing bytes are ignored
    const auto img = read_pgm(b);
    CHECK(img.size() == 9);
    for (double v : img.pixels()) CHECK(v == 7.0 / 255.0);
}

TEST_CASE("write_pgm rounds half up and emits P5/255") {
    const auto out = write_pgm(GrayImage(1, 1, 0.5));
    const std::string header(out.begin(), out.end() - 1);
    CHECK(header == "P5\n1 1\n255\n");
    CHECK(out.back() == 128);
    const auto zeros = write_pgm(GrayImage(4, 3, 0.0));
    CHECK(std::count(zeros.end() - 12, zeros.end(), 0) == 12);
}

TEST_CASE("8-bit P5 round trip preserves samples (property)") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> dim(1, 40);
    std::uniform_int_distribution<int> sample(0, 255);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t w = dim(rng), h = dim(rng);
        std::vector<unsigned char> samples(w * h);
        for (auto& s : samples) s = static_cast<unsigned char>(sample(rng));
        const auto original = p5(w, h, samples);
        const auto again = write_pgm(read_pgm(original));
        REQUIRE(again.size() == original.size());
        CHECK(std::equal(samples.begin(), samples.end(), again.end() - static_cast<long>(samples.size())));
        // Images already on the /255 grid are a fixed point of write then read.
        const auto img = read_pgm(original);
        CHECK(read_pgm(write_pgm(img)) == img);
    }
}

TEST_CASE("normalize_orientation mirrors right-heavy images only") {
    GrayImage left(8, 4, 0.0);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) left(c, r) = 0.1 * static_cast<double>(c + r + 1) / 8.0;

    auto [same, flipped] = normalize_orientation(left);
    CHECK_FALSE(flipped);
    CHECK(same == left);

    auto [back, flipped_back] = normalize_orientation(mirror_horizontal(left));
    CHECK(flipped_back);
    CHECK(back == left);

    GrayImage symmetric(6, 3, 0.0);
    symmetric(0, 1) = symmetric(5, 1) = 0.7;
    CHECK_FALSE(normalize_orientation(symmetric).second);
}

TEST_CASE("mirror is an involution and normalize_orientation is idempotent") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> dim(1, 20);
    for (int trial = 0; trial < 200; ++trial) {
        const auto img = oracle::random_quantized_image(rng, dim(rng), dim(rng), 0.3);
        CHECK(mirror_horizontal(mirror_horizontal(img)) == img);
        const auto once = normalize_orientation(img).first;
        CHECK(normalize_orientation(once).first == once);
    }
}

TEST_CASE("edge CSV parse and errors") {
    const auto e = read_edge_csv("y,x\n1,10\n2,11\n");
    REQUIRE(e.size() == 2);
    CHECK(e[0] == EdgePoint{10.0, 1});
    CHECK(e[1] == EdgePoint{11.0, 2});

    CHECK_THROWS_WITH_AS(read_edge_csv("y,x\n1,10\n3,12\n"), "non-contiguous row index at line 3", ParseError);
    CHECK_THROWS_WITH_AS(read_edge_csv("y,x\n1,10\n1,12\n"), "duplicate row index at line 3", ParseError);
    CHECK_THROWS_WITH_AS(read_edge_csv("y,x\n2,10\n"), "non-contiguous row index at line 2", ParseError);
    CHECK_THROWS_AS(read_edge_csv("y,x\n1,0.5\n"), ParseError);
    CHECK_THROWS_AS(read_edge_csv("y,x\n1,2000000\n"), ParseError);
    CHECK_THROWS_AS(read_edge_csv("x,y\n1,2\n"), ParseError);
    CHECK_THROWS_AS(read_edge_csv("y,x\n1;2\n"), ParseError);
    CHECK(read_edge_csv("y,x\n").empty());
    CHECK(read_edge_csv("y,x\r\n1,4.5\r\n").at(0).x == 4.5);
}

TEST_CASE("edge CSV write then read is the identity up to 6 decimals (property)") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> x(1.0, 1024.0);
    std::uniform_int_distribution<int> len(0, 300);
    for (int trial = 0; trial < 100; ++trial) {
        EdgePolyline edge(static_cast<std::size_t>(len(rng)));
        for (std::size_t i = 0; i < edge.size(); ++i) edge[i] = {x(rng), i + 1};
        const std::string text = write_edge_csv(edge);
        const auto back = read_edge_csv(text);
        REQUIRE(back.size() == edge.size());
        for (std::size_t i = 0; i < edge.size(); ++i) {
            CHECK(back[i].y == edge[i].y);
            CHECK(std::fabs(back[i].x - edge[i].x) <= 5e-7);
        }
        CHECK(write_edge_csv(back) == text);
    }
}
