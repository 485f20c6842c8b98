/**
 * @file image.hpp
 * @brief 8-bit single-channel raster and class labels
 */
#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace cxraug {

/// Binary diagnosis label. The numeric value doubles as the classifier column index.
enum class Label : std::uint8_t { normal = 0, covid = 1 };

std::string_view to_string(Label label);

/// Parses exactly "covid" or "normal"; anything else throws InvalidArgument.
Label parse_label(std::string_view token);

/**
 * Row-major 8-bit grayscale image. Width and height are at least 1 and the
 * pixel buffer always holds width * height values. Immutable once built.
 */
class GrayImage {
public:
    GrayImage(int width, int height, std::vector<std::uint8_t> pixels);

    /// Constant image.
    GrayImage(int width, int height, std::uint8_t value = 0);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return pixels_.size(); }

    std::uint8_t at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }

    /// Edge-replicating access for coordinates outside the raster.
    std::uint8_t at_clamped(int x, int y) const;

    std::span<const std::uint8_t> pixels() const { return pixels_; }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    int width_;
    int height_;
    std::vector<std::uint8_t> pixels_;
};

}  // namespace cxraug
