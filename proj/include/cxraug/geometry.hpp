/**
 * @file geometry.hpp
 * @brief Geometric transforms with nearest-edge fill
 */
#pragma once

#include "cxraug/image.hpp"

namespace cxraug {

/**
 * Rotates about the image center ((W-1)/2, (H-1)/2), keeping the original
 * dimensions. Positive angles turn the content counter-clockwise as displayed.
 * Each output pixel is inverse-mapped and sampled bilinearly; source
 * coordinates outside the raster take the nearest edge pixel.
 */
GrayImage rotate(const GrayImage& img, double angle_deg);

/**
 * Shifts content by round(dx_fraction * W) pixels right and
 * round(dy_fraction * H) pixels down; vacated pixels replicate the edge.
 */
GrayImage translate(const GrayImage& img, double dx_fraction, double dy_fraction);

GrayImage hflip(const GrayImage& img);

/// Bilinear sample at a real-valued position; coordinates outside the raster clamp to the edge.
double sample_bilinear(const GrayImage& img, double x, double y);

}  // namespace cxraug
