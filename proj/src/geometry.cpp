/**
 * @file geometry.cpp
 * @brief Rotation, translation and mirroring with nearest-edge fill
 */
#include "cxraug/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cxraug {

namespace {

// Trigonometric noise (sin(pi) = 1.2e-16) would otherwise turn exact
// right-angle rotations into blends of neighbouring pixels.
double snap(double coord) {
    const double nearest = std::round(coord);
    return std::abs(coord - nearest) < 1e-9 ? nearest : coord;
}

std::uint8_t to_u8(double value) {
    return static_cast<std::uint8_t>(std::clamp(std::floor(value + 0.5), 0.0, 255.0));
}

}  // namespace

double sample_bilinear(const GrayImage& img, double x, double y) {
    const double xc = std::clamp(x, 0.0, static_cast<double>(img.width() - 1));
    const double yc = std::clamp(y, 0.0, static_cast<double>(img.height() - 1));
    const int x0 = static_cast<int>(std::floor(xc));
    const int y0 = static_cast<int>(std::floor(yc));
    const double fx = xc - x0;
    const double fy = yc - y0;
    const double top = (1.0 - fx) * img.at_clamped(x0, y0) + fx * img.at_clamped(x0 + 1, y0);
    const double bottom = (1.0 - fx) * img.at_clamped(x0, y0 + 1) + fx * img.at_clamped(x0 + 1, y0 + 1);
    return (1.0 - fy) * top + fy * bottom;
}

GrayImage rotate(const GrayImage& img, double angle_deg) {
    if (angle_deg == 0.0) {
        return img;
    }
    const double theta = angle_deg * std::numbers::pi / 180.0;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double cx = (img.width() - 1) / 2.0;
    const double cy = (img.height() - 1) / 2.0;

    std::vector<std::uint8_t> out(img.size());
    std::size_t i = 0;
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            const double u = x - cx;
            const double v = y - cy;
            const double sx = snap(cx + u * c - v * s);
            const double sy = snap(cy + u * s + v * c);
            out[i++] = to_u8(sample_bilinear(img, sx, sy));
        }
    }
    return GrayImage(img.width(), img.height(), std::move(out));
}

GrayImage translate(const GrayImage& img, double dx_fraction, double dy_fraction) {
    const int shift_x = static_cast<int>(std::lround(dx_fraction * img.width()));
    const int shift_y = static_cast<int>(std::lround(dy_fraction * img.height()));
    if (shift_x == 0 && shift_y == 0) {
        return img;
    }
    std::vector<std::uint8_t> out(img.size());
    std::size_t i = 0;
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            out[i++] = img.at_clamped(x - shift_x, y - shift_y);
        }
    }
    return GrayImage(img.width(), img.height(), std::move(out));
}

GrayImage hflip(const GrayImage& img) {
    std::vector<std::uint8_t> out(img.pixels().begin(), img.pixels().end());
    for (int y = 0; y < img.height(); ++y) {
        auto row = out.begin() + static_cast<std::ptrdiff_t>(y) * img.width();
        std::reverse(row, row + img.width());
    }
    return GrayImage(img.width(), img.height(), std::move(out));
}

}  // namespace cxraug
