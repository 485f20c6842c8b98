/**
 * @file enhance.cpp
 * @brief Global HE and tile-interpolated CLAHE
 */
#include "cxraug/enhance.hpp"
#include "cxraug/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace cxraug {

namespace {

// One axis of the tile grid. Centers are stored doubled (2 * center) so that
// every pixel / center distance is an integer.
struct TileAxis {
    std::vector<int> start;
    std::vector<int> extent;
    std::vector<int> center2;
};

TileAxis make_axis(int length, int tiles, const char* axis_name) {
    if (tiles > length) {
        throw InvalidArgument(std::string("tile count along ") + axis_name + " (" + std::to_string(tiles) +
                              ") exceeds image size " + std::to_string(length));
    }
    const int step = (length + tiles - 1) / tiles;
    TileAxis axis;
    for (int i = 0; i < tiles; ++i) {
        const int start = i * step;
        const int extent = std::min(step, length - start);
        if (extent <= 0) {
            throw InvalidArgument(std::string("tile grid of ") + std::to_string(tiles) + " along " + axis_name +
                                  " leaves an empty edge tile for size " + std::to_string(length));
        }
        axis.start.push_back(start);
        axis.extent.push_back(extent);
        axis.center2.push_back(2 * start + extent - 1);
    }
    return axis;
}

// Neighbouring tile pair and integer blend weight for one pixel coordinate:
// value = ((span - offset) * map[lo] + offset * map[hi]) / span.
struct Blend {
    int lo = 0;
    int hi = 0;
    std::int64_t offset = 0;
    std::int64_t span = 1;
};

std::vector<Blend> make_blends(const TileAxis& axis, int length) {
    const int n = static_cast<int>(axis.center2.size());
    std::vector<Blend> blends(static_cast<std::size_t>(length));
    int j = 0;
    for (int p = 0; p < length; ++p) {
        const int pos2 = 2 * p;
        Blend& b = blends[static_cast<std::size_t>(p)];
        if (pos2 <= axis.center2.front()) {
            b = {0, 0, 0, 1};
        } else if (pos2 >= axis.center2.back()) {
            b = {n - 1, n - 1, 0, 1};
        } else {
            while (axis.center2[static_cast<std::size_t>(j + 1)] <= pos2) ++j;
            const int c0 = axis.center2[static_cast<std::size_t>(j)];
            const int c1 = axis.center2[static_cast<std::size_t>(j + 1)];
            b = {j, j + 1, pos2 - c0, c1 - c0};
        }
    }
    return blends;
}

}  // namespace

void ClaheConfig::validate() const {
    if (tiles_x < 1 || tiles_y < 1) {
        throw InvalidArgument("CLAHE tile counts must be >= 1");
    }
    if (!(clip_fraction > 0.0 && clip_fraction <= 1.0)) {
        throw InvalidArgument("CLAHE clip fraction must lie in (0, 1], got " + std::to_string(clip_fraction));
    }
    if (n_bins < 2 || n_bins > 256) {
        throw InvalidArgument("CLAHE bin count must lie in [2, 256], got " + std::to_string(n_bins));
    }
}

Histogram region_histogram(const GrayImage& img, const Region& region, int n_bins) {
    if (region.width <= 0 || region.height <= 0) {
        throw InvalidArgument("histogram region is empty");
    }
    if (region.x < 0 || region.y < 0 || region.x + region.width > img.width() ||
        region.y + region.height > img.height()) {
        throw InvalidArgument("histogram region exceeds image bounds");
    }
    if (n_bins < 2 || n_bins > 256) {
        throw InvalidArgument("histogram bin count must lie in [2, 256]");
    }
    Histogram hist;
    hist.counts.assign(static_cast<std::size_t>(n_bins), 0);
    for (int y = region.y; y < region.y + region.height; ++y) {
        for (int x = region.x; x < region.x + region.width; ++x) {
            ++hist.counts[static_cast<std::size_t>(intensity_bin(img.at(x, y), n_bins))];
        }
    }
    hist.total = static_cast<std::uint64_t>(region.width) * static_cast<std::uint64_t>(region.height);
    return hist;
}

Histogram clip_and_redistribute(const Histogram& hist, std::uint64_t clip_count) {
    if (clip_count < 1) {
        throw InvalidArgument("clip count must be >= 1");
    }
    Histogram out = hist;
    const std::uint64_t n = out.bins();
    std::uint64_t excess = 0;
    for (auto& c : out.counts) {
        if (c > clip_count) {
            excess += c - clip_count;
            c = clip_count;
        }
    }
    if (excess == 0 || n == 0) {
        return out;
    }
    const std::uint64_t batch = excess / n;
    std::uint64_t residual = excess % n;
    for (auto& c : out.counts) c += batch;
    if (residual > 0) {
        const std::uint64_t stride = n / residual;
        for (std::uint64_t i = 0; i < n && residual > 0; i += stride, --residual) {
            ++out.counts[i];
        }
    }
    return out;
}

ToneMap equalize_map(const Histogram& hist) {
    ToneMap map;
    std::iota(map.begin(), map.end(), std::uint8_t{0});
    const int n_bins = static_cast<int>(hist.bins());
    if (n_bins == 0) return map;

    std::vector<std::uint64_t> cdf(hist.counts.size());
    std::partial_sum(hist.counts.begin(), hist.counts.end(), cdf.begin());
    const std::uint64_t total = cdf.back();
    const auto first = std::find_if(cdf.begin(), cdf.end(), [](std::uint64_t c) { return c > 0; });
    if (first == cdf.end() || *first == total) {
        return map;
    }
    const std::uint64_t cdf_min = *first;
    const std::uint64_t denom = total - cdf_min;
    for (int v = 0; v < 256; ++v) {
        const std::uint64_t c = cdf[static_cast<std::size_t>(intensity_bin(static_cast<std::uint8_t>(v), n_bins))];
        if (c <= cdf_min) {
            map[static_cast<std::size_t>(v)] = 0;
            continue;
        }
        const std::uint64_t num = (c - cdf_min) * 255;
        map[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>((2 * num + denom) / (2 * denom));
    }
    return map;
}

GrayImage apply_map(const GrayImage& img, const ToneMap& map) {
    std::vector<std::uint8_t> out(img.pixels().begin(), img.pixels().end());
    for (auto& p : out) p = map[p];
    return GrayImage(img.width(), img.height(), std::move(out));
}

GrayImage equalize_global(const GrayImage& img) {
    return apply_map(img, equalize_map(region_histogram(img, {0, 0, img.width(), img.height()}, 256)));
}

std::uint64_t clip_count_for(double clip_fraction, std::uint64_t tile_pixels) {
    const long long rounded = std::llround(clip_fraction * static_cast<double>(tile_pixels));
    return static_cast<std::uint64_t>(std::max(1LL, rounded));
}

GrayImage clahe(const GrayImage& img, const ClaheConfig& cfg) {
    cfg.validate();
    if (img.width() < 2 || img.height() < 2) {
        throw InvalidArgument("CLAHE needs an image of at least 2x2, got " + std::to_string(img.width()) + "x" +
                              std::to_string(img.height()));
    }
    const TileAxis ax = make_axis(img.width(), cfg.tiles_x, "x");
    const TileAxis ay = make_axis(img.height(), cfg.tiles_y, "y");

    // Tiles are independent; sequential evaluation is the reference order.
    std::vector<ToneMap> maps(static_cast<std::size_t>(cfg.tiles_x) * static_cast<std::size_t>(cfg.tiles_y));
    for (int ty = 0; ty < cfg.tiles_y; ++ty) {
        for (int tx = 0; tx < cfg.tiles_x; ++tx) {
            const Region tile{ax.start[static_cast<std::size_t>(tx)], ay.start[static_cast<std::size_t>(ty)],
                              ax.extent[static_cast<std::size_t>(tx)], ay.extent[static_cast<std::size_t>(ty)]};
            const Histogram hist = region_histogram(img, tile, cfg.n_bins);
            auto& map = maps[static_cast<std::size_t>(ty) * static_cast<std::size_t>(cfg.tiles_x) +
                             static_cast<std::size_t>(tx)];
            // A tile confined to one bin keeps the identity map; clipping would otherwise smear it.
            const bool single_bin = std::count_if(hist.counts.begin(), hist.counts.end(),
                                                  [](std::uint64_t c) { return c > 0; }) == 1;
            map = single_bin ? equalize_map(hist)
                             : equalize_map(clip_and_redistribute(hist, clip_count_for(cfg.clip_fraction, hist.total)));
        }
    }

    const std::vector<Blend> bx = make_blends(ax, img.width());
    const std::vector<Blend> by = make_blends(ay, img.height());
    const auto map_at = [&](int tx, int ty) -> const ToneMap& {
        return maps[static_cast<std::size_t>(ty) * static_cast<std::size_t>(cfg.tiles_x) + static_cast<std::size_t>(tx)];
    };

    std::vector<std::uint8_t> out(img.size());
    for (int y = 0; y < img.height(); ++y) {
        const Blend& v = by[static_cast<std::size_t>(y)];
        for (int x = 0; x < img.width(); ++x) {
            const Blend& h = bx[static_cast<std::size_t>(x)];
            const std::uint8_t value = img.at(x, y);
            const std::int64_t top = (h.span - h.offset) * map_at(h.lo, v.lo)[value] + h.offset * map_at(h.hi, v.lo)[value];
            const std::int64_t bottom =
                (h.span - h.offset) * map_at(h.lo, v.hi)[value] + h.offset * map_at(h.hi, v.hi)[value];
            const std::int64_t sum = (v.span - v.offset) * top + v.offset * bottom;
            const std::int64_t denom = h.span * v.span;
            out[static_cast<std::size_t>(y) * static_cast<std::size_t>(img.width()) + static_cast<std::size_t>(x)] =
                static_cast<std::uint8_t>((2 * sum + denom) / (2 * denom));
        }
    }
    return GrayImage(img.width(), img.height(), std::move(out));
}

GrayImage ahe(const GrayImage& img, const ClaheConfig& cfg) {
    ClaheConfig unclipped = cfg;
    unclipped.clip_fraction = 1.0;
    return clahe(img, unclipped);
}

}  // namespace cxraug
