/**
 * @file features.hpp
 * @brief Built-in baseline feature extractor standing in for a frozen backbone
 *
 * 288 values per image: the image resized to 16x16 and scaled to [0, 1]
 * (row-major, 256 values), then a 32-bin intensity histogram of the full
 * image normalized to unit mass.
 */
#pragma once

#include "cxraug/manifest.hpp"
#include "cxraug/trainer.hpp"

#include <vector>

namespace cxraug {

inline constexpr int kThumbnailSize = 16;
inline constexpr int kFeatureHistogramBins = 32;
inline constexpr std::size_t kBaselineFeatureDim =
    static_cast<std::size_t>(kThumbnailSize) * kThumbnailSize + kFeatureHistogramBins;

FeatureVector extract_baseline_features(const GrayImage& img, std::string id = {}, Label label = Label::normal);

/// Loads and featurizes every entry; ids are the manifest path strings.
std::vector<FeatureVector> featurize_manifest(const Manifest& manifest, unsigned workers = 1);

}  // namespace cxraug
