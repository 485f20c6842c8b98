/**
 * @file enhance.hpp
 * @brief Histogram equalization family: global HE, AHE and CLAHE
 *
 * CLAHE partitions the image into a tiles_x by tiles_y grid of tiles of
 * ceil(W / tiles_x) by ceil(H / tiles_y) pixels (edge tiles may be smaller).
 * Each tile histogram is clipped at max(1, round(clip_fraction * tile_pixels)),
 * the excess is redistributed in a single pass, and the clipped CDF becomes
 * the tile's lookup table. A tile whose pixels all share one bin skips
 * clipping and keeps the identity map. An output pixel blends the lookup tables of the
 * four surrounding tile centers bilinearly; beyond the outermost centers the
 * nearest tile maps are used. Interpolation is carried out in exact integer
 * arithmetic so results do not depend on evaluation order.
 */
#pragma once

#include "cxraug/image.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace cxraug {

struct ClaheConfig {
    int tiles_x = 8;
    int tiles_y = 8;
    double clip_fraction = 0.03;
    int n_bins = 256;

    /// Throws InvalidArgument on out-of-range fields.
    void validate() const;
};

struct Region {
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;
};

struct Histogram {
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;

    std::size_t bins() const { return counts.size(); }
};

using ToneMap = std::array<std::uint8_t, 256>;

/// Bin of an intensity: floor(value * n_bins / 256).
inline int intensity_bin(std::uint8_t value, int n_bins) { return value * n_bins / 256; }

Histogram region_histogram(const GrayImage& img, const Region& region, int n_bins = 256);

/**
 * Caps every bin at clip_count, pools the excess E, adds floor(E / n) to all
 * bins and then 1 to bins 0, s, 2s, ... for the residual r = E mod n with
 * stride s = floor(n / r). No re-clipping afterwards, so bins may end up as
 * high as clip_count + floor(E / n) + 1.
 */
Histogram clip_and_redistribute(const Histogram& hist, std::uint64_t clip_count);

/**
 * Lookup table m(v) = round((cdf(bin(v)) - cdf_min) / (total - cdf_min) * 255)
 * with cdf_min the smallest nonzero CDF value, clamped at 0 below it.
 * Returns the identity when total == cdf_min (constant or empty region).
 */
ToneMap equalize_map(const Histogram& hist);

GrayImage apply_map(const GrayImage& img, const ToneMap& map);

GrayImage equalize_global(const GrayImage& img);

/// Clip count used for a tile holding tile_pixels pixels.
std::uint64_t clip_count_for(double clip_fraction, std::uint64_t tile_pixels);

GrayImage clahe(const GrayImage& img, const ClaheConfig& cfg = {});

/// Unclipped adaptive equalization: clahe with clip_fraction forced to 1.
GrayImage ahe(const GrayImage& img, const ClaheConfig& cfg = {});

}  // namespace cxraug
