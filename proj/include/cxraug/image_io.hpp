/**
 * @file image_io.hpp
 * @brief PNG / binary PGM (P5) reading and writing
 *
 * Loading sniffs the file signature, so extensions do not matter on input.
 * RGB(A) PNGs are reduced to luma with round-half-up ITU-R 601 weights.
 * Saving picks PNG for a ".png" extension (case-insensitive) and PGM otherwise.
 */
#pragma once

#include "cxraug/image.hpp"

#include <filesystem>

namespace cxraug {

GrayImage load_image(const std::filesystem::path& path);

void save_image(const GrayImage& img, const std::filesystem::path& path);

/// round(0.299 r + 0.587 g + 0.114 b), halves rounded up, in exact integer arithmetic.
std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b);

}  // namespace cxraug
