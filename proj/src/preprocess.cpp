/**
 * @file preprocess.cpp
 * @brief Resize, tensorize and normalize
 */
#include "cxraug/preprocess.hpp"
#include "cxraug/error.hpp"
#include "cxraug/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cxraug {

namespace {

void check_stds(const std::array<double, 3>& stds) {
    for (double s : stds) {
        if (!(s > 0.0)) {
            throw InvalidArgument("normalization deviations must be positive");
        }
    }
}

}  // namespace

GrayImage resize_bilinear(const GrayImage& img, int width, int height) {
    if (width < 1 || height < 1) {
        throw InvalidArgument("resize target must be at least 1x1");
    }
    if (width == img.width() && height == img.height()) {
        return img;
    }
    const double scale_x = static_cast<double>(img.width()) / width;
    const double scale_y = static_cast<double>(img.height()) / height;
    std::vector<std::uint8_t> out(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
    std::size_t i = 0;
    for (int y = 0; y < height; ++y) {
        const double sy = (y + 0.5) * scale_y - 0.5;
        for (int x = 0; x < width; ++x) {
            const double sx = (x + 0.5) * scale_x - 0.5;
            out[i++] = static_cast<std::uint8_t>(std::clamp(std::floor(sample_bilinear(img, sx, sy) + 0.5), 0.0, 255.0));
        }
    }
    return GrayImage(width, height, std::move(out));
}

Tensor to_unit_tensor(const GrayImage& img) {
    if (img.width() != kTensorSize || img.height() != kTensorSize) {
        throw InvalidArgument("tensorization expects a 224x224 image, got " + std::to_string(img.width()) + "x" +
                              std::to_string(img.height()));
    }
    Tensor t;
    for (int y = 0; y < kTensorSize; ++y) {
        for (int x = 0; x < kTensorSize; ++x) {
            const double v = img.at(x, y) / 255.0;
            for (int c = 0; c < kTensorChannels; ++c) t.at(c, y, x) = v;
        }
    }
    return t;
}

Tensor normalize(const Tensor& t, const std::array<double, 3>& means, const std::array<double, 3>& stds) {
    check_stds(stds);
    Tensor out;
    for (int c = 0; c < kTensorChannels; ++c) {
        for (int y = 0; y < kTensorSize; ++y) {
            for (int x = 0; x < kTensorSize; ++x) {
                out.at(c, y, x) = (t.at(c, y, x) - means[c]) / stds[c];
            }
        }
    }
    return out;
}

Tensor denormalize(const Tensor& t, const std::array<double, 3>& means, const std::array<double, 3>& stds) {
    check_stds(stds);
    Tensor out;
    for (int c = 0; c < kTensorChannels; ++c) {
        for (int y = 0; y < kTensorSize; ++y) {
            for (int x = 0; x < kTensorSize; ++x) {
                out.at(c, y, x) = t.at(c, y, x) * stds[c] + means[c];
            }
        }
    }
    return out;
}

Tensor train_transform(const GrayImage& img, Rng& rng, const TransformConfig& cfg) {
    const double angle = rng.uniform(-cfg.max_rotation_deg, cfg.max_rotation_deg);
    const bool flip = rng.bernoulli(cfg.flip_probability);
    GrayImage x = rotate(resize_bilinear(img), angle);
    if (flip) {
        x = hflip(x);
    }
    return normalize(to_unit_tensor(x), cfg.means, cfg.stds);
}

Tensor eval_transform(const GrayImage& img, const TransformConfig& cfg) {
    return normalize(to_unit_tensor(resize_bilinear(img)), cfg.means, cfg.stds);
}

}  // namespace cxraug
