#include "aepm/preprocess.hpp"

#include <algorithm>

#include "aepm/error.hpp"

namespace aepm {

Histogram gray_histogram(const GrayImage& img) {
    Histogram h;
    h.bins = kernels::histogram(img.pixels());
    h.total = img.size();
    return h;
}

std::vector<double> smooth_histogram(const Histogram& hist) {
    constexpr int kHalf = 2;
    const int n = static_cast<int>(hist.bins.size());
    std::vector<double> s(hist.bins.size());
    for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - kHalf);
        const int hi = std::min(n - 1, i + kHalf);
        double sum = 0.0;
        for (int j = lo; j <= hi; ++j) sum += static_cast<double>(hist.bins[static_cast<std::size_t>(j)]);
        s[static_cast<std::size_t>(i)] = sum / static_cast<double>(hi - lo + 1);
    }
    return s;
}

int otsu_bin(const Histogram& hist) {
    const double total = static_cast<double>(hist.total);
    double weighted_total = 0.0;
    for (std::size_t i = 0; i < hist.bins.size(); ++i) weighted_total += static_cast<double>(i) * hist.bins[i];

    double w0 = 0.0;
    double sum0 = 0.0;
    double best = -1.0;
    int best_bin = 0;
    for (std::size_t t = 0; t + 1 < hist.bins.size(); ++t) {
        w0 += static_cast<double>(hist.bins[t]);
        sum0 += static_cast<double>(t) * hist.bins[t];
        const double w1 = total - w0;
        if (w0 == 0.0 || w1 == 0.0) continue;
        const double m0 = sum0 / w0;
        const double m1 = (weighted_total - sum0) / w1;
        const double between = w0 * w1 * (m0 - m1) * (m0 - m1);
        if (between > best) {
            best = between;
            best_bin = static_cast<int>(t);
        }
    }
    return best_bin;
}

ThresholdResult find_threshold(const Histogram& hist) {
    if (hist.total == 0) {
        throw PipelineError("find_threshold: empty histogram");
    }
    const auto s = smooth_histogram(hist);
    // Bin 0 has no left neighbour; it counts as a peak when it is positive and
    // not below bin 1, which is how the black background spike shows up.
    bool seen_peak = s[0] > 0.0 && s[0] >= s[1];
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        if (seen_peak && s[i] < s[i - 1] && s[i] <= s[i + 1]) {
            return {static_cast<double>(i) / 255.0, static_cast<int>(i), false};
        }
        if (s[i] > s[i - 1] && s[i] >= s[i + 1]) seen_peak = true;
    }
    const int t = otsu_bin(hist);
    return {static_cast<double>(t) / 255.0, t, true};
}

BinaryMask binarize(const GrayImage& img, double c) {
    BinaryMask mask(img.width(), img.height());
    kernels::binarize(img.pixels(), c, mask.bits());
    return mask;
}

namespace {

std::uint32_t find_root(std::vector<std::uint32_t>& parent, std::uint32_t a) {
    while (parent[a] != a) {
        parent[a] = parent[parent[a]];
        a = parent[a];
    }
    return a;
}

void unite(std::vector<std::uint32_t>& parent, std::uint32_t a, std::uint32_t b) {
    a = find_root(parent, a);
    b = find_root(parent, b);
    if (a == b) return;
    if (a < b) parent[b] = a; else parent[a] = b;
}

}  // namespace

LabelMap label_components(const BinaryMask& mask, Connectivity connectivity) {
    const std::size_t w = mask.width();
    const std::size_t h = mask.height();
    const bool eight = connectivity == Connectivity::Eight;

    std::vector<std::uint32_t> provisional(w * h, 0);
    std::vector<std::uint32_t> parent{0};

    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            if (!mask(c, r)) continue;
            std::uint32_t label = 0;
            auto visit = [&](std::size_t nc, std::size_t nr) {
                const std::uint32_t other = provisional[nr * w + nc];
                if (other == 0) return;
                if (label == 0) label = other; else unite(parent, label, other);
            };
            if (c > 0) visit(c - 1, r);
            if (r > 0) {
                visit(c, r - 1);
                if (eight) {
                    if (c > 0) visit(c - 1, r - 1);
                    if (c + 1 < w) visit(c + 1, r - 1);
                }
            }
            if (label == 0) {
                label = static_cast<std::uint32_t>(parent.size());
                parent.push_back(label);
            }
            provisional[r * w + c] = label;
        }
    }

    LabelMap lm;
    lm.width = w;
    lm.height = h;
    lm.labels.assign(w * h, 0);
    lm.component_sizes.assign(1, 0);
    std::vector<std::uint32_t> final_of_root(parent.size(), 0);
    for (std::size_t i = 0; i < provisional.size(); ++i) {
        if (provisional[i] == 0) continue;
        const std::uint32_t root = find_root(parent, provisional[i]);
        if (final_of_root[root] == 0) {
            final_of_root[root] = static_cast<std::uint32_t>(lm.component_sizes.size());
            lm.component_sizes.push_back(0);
        }
        const std::uint32_t label = final_of_root[root];
        lm.labels[i] = label;
        ++lm.component_sizes[label];
    }
    return lm;
}

BinaryMask largest_component(const LabelMap& lm) {
    if (lm.component_count() == 0) {
        throw PipelineError("no foreground object");
    }
    std::size_t best = 1;
    for (std::size_t l = 2; l < lm.component_sizes.size(); ++l) {
        if (lm.component_sizes[l] > lm.component_sizes[best]) best = l;
    }
    BinaryMask mask(lm.width, lm.height);
    auto bits = mask.bits();
    for (std::size_t i = 0; i < lm.labels.size(); ++i) bits[i] = lm.labels[i] == best ? 1 : 0;
    return mask;
}

BackgroundRemoval remove_background(const GrayImage& img, Connectivity connectivity) {
    BackgroundRemoval out;
    out.threshold = find_threshold(gray_histogram(img));
    const LabelMap lm = label_components(binarize(img, out.threshold.c), connectivity);
    out.foreground = largest_component(lm);
    out.objects_removed = lm.component_count() - 1;

    out.clean = GrayImage(img.width(), img.height(), 0.0, img.source_max_value());
    const auto src = img.pixels();
    const auto keep = out.foreground.bits();
    auto dst = out.clean.pixels();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = keep[i] ? src[i] : 0.0;
    return out;
}

}  // namespace aepm
