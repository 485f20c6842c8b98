/**
 * @file image.cpp
 * @brief GrayImage construction and label vocabulary
 */
#include "cxraug/image.hpp"
#include "cxraug/error.hpp"

#include <algorithm>
#include <string>

namespace cxraug {

std::string_view to_string(Label label) {
    return label == Label::covid ? "covid" : "normal";
}

Label parse_label(std::string_view token) {
    if (token == "covid") return Label::covid;
    if (token == "normal") return Label::normal;
    throw InvalidArgument("unknown label '" + std::string(token) + "' (expected covid|normal)");
}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width < 1 || height < 1) {
        throw InvalidArgument("image dimensions must be at least 1x1, got " + std::to_string(width) +
                              "x" + std::to_string(height));
    }
    if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw InvalidArgument("pixel buffer holds " + std::to_string(pixels_.size()) +
                              " values, expected " + std::to_string(width) + "x" + std::to_string(height));
    }
}

GrayImage::GrayImage(int width, int height, std::uint8_t value)
    : GrayImage(width, height,
                std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(width, 0)) *
                                              static_cast<std::size_t>(std::max(height, 0)),
                                          value)) {}

std::uint8_t GrayImage::at_clamped(int x, int y) const {
    return at(std::clamp(x, 0, width_ - 1), std::clamp(y, 0, height_ - 1));
}

}  // namespace cxraug
