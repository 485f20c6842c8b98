/**
 * @file augment.hpp
 * @brief CLAHE augmentation chain and minority-class balancing
 */
#pragma once

#include "cxraug/enhance.hpp"
#include "cxraug/image.hpp"
#include "cxraug/random.hpp"

#include <cstdint>
#include <vector>

namespace cxraug {

struct AugmentConfig {
    double max_rotation_deg = 20.0;
    double width_shift_fraction = 0.01;
    double height_shift_fraction = 0.01;
    bool horizontal_flip = true;
    ClaheConfig clahe;
    std::uint64_t seed = 0;
    int target_count = 1847;

    void validate() const;
};

/**
 * One synthetic sample: rotate by U[-max, max] degrees, shift by
 * U[-shift, shift] of each dimension, flip with probability 1/2 (if enabled),
 * then CLAHE. The four draws are always consumed in that order so the stream
 * position does not depend on which stages are enabled.
 */
GrayImage augment_one(const GrayImage& img, const AugmentConfig& cfg, Rng& rng);

/**
 * Grows imgs to cfg.target_count: originals first and untouched, then
 * augmented variants of inputs taken round-robin. Output slot k draws from
 * its own stream seeded with cfg.seed ^ k, so the result is independent of
 * the worker count.
 */
std::vector<GrayImage> balance_class(const std::vector<GrayImage>& imgs, const AugmentConfig& cfg,
                                     unsigned workers = 1);

}  // namespace cxraug
