/**
 * @file feature_io.hpp
 * @brief Feature-vector files and serialized classifier heads
 *
 * CSV layout: header `id,label,d0,...,d{D-1}`, one record per line, labels
 * `covid` or `normal`.
 *
 * Binary layout (all integers little-endian):
 *   "FVEC" | u32 D | u32 count | count x (u32 id_len | id bytes | u8 label | D x f32)
 * with label byte 1 = covid, 0 = normal.
 */
#pragma once

#include "cxraug/trainer.hpp"

#include <filesystem>
#include <vector>

namespace cxraug {

/// Sniffs the FVEC magic; anything else is parsed as CSV.
std::vector<FeatureVector> read_features(const std::filesystem::path& path);

void write_features_csv(const std::vector<FeatureVector>& features, const std::filesystem::path& path);

/// Values are narrowed to 32-bit floats.
void write_features_binary(const std::vector<FeatureVector>& features, const std::filesystem::path& path);

/// Binary for a ".fvec" extension, CSV otherwise.
void write_features(const std::vector<FeatureVector>& features, const std::filesystem::path& path);

void save_head(const LinearHead& head, const std::filesystem::path& path);
LinearHead load_head(const std::filesystem::path& path);

}  // namespace cxraug
