/**
 * @file preprocess.hpp
 * @brief Per-sample transform feeding a 224x224 three-channel backbone
 *
 * Training path: resize -> random rotate -> random horizontal flip ->
 * tensorize -> normalize. Evaluation path drops the random stages.
 */
#pragma once

#include "cxraug/image.hpp"
#include "cxraug/random.hpp"

#include <array>
#include <vector>

namespace cxraug {

inline constexpr int kTensorChannels = 3;
inline constexpr int kTensorSize = 224;

/// ImageNet channel statistics.
inline constexpr std::array<double, 3> kChannelMeans = {0.485, 0.456, 0.406};
inline constexpr std::array<double, 3> kChannelStds = {0.229, 0.224, 0.225};

/// Channel-major 3 x 224 x 224 volume.
class Tensor {
public:
    static constexpr std::size_t kPlane = static_cast<std::size_t>(kTensorSize) * kTensorSize;

    Tensor() : values_(kTensorChannels * kPlane, 0.0) {}

    double& at(int c, int y, int x) { return values_[index(c, y, x)]; }
    double at(int c, int y, int x) const { return values_[index(c, y, x)]; }

    const std::vector<double>& values() const { return values_; }

    friend bool operator==(const Tensor&, const Tensor&) = default;

private:
    static std::size_t index(int c, int y, int x) {
        return static_cast<std::size_t>(c) * kPlane + static_cast<std::size_t>(y) * kTensorSize +
               static_cast<std::size_t>(x);
    }

    std::vector<double> values_;
};

struct TransformConfig {
    double max_rotation_deg = 20.0;
    double flip_probability = 0.5;
    std::array<double, 3> means = kChannelMeans;
    std::array<double, 3> stds = kChannelStds;
};

GrayImage resize_bilinear(const GrayImage& img, int width = kTensorSize, int height = kTensorSize);

/// Replicates the gray channel three times, scaled to [0, 1]. Requires a 224x224 image.
Tensor to_unit_tensor(const GrayImage& img);

/// Per-channel (v - mean) / std. Throws InvalidArgument if any std <= 0.
Tensor normalize(const Tensor& t, const std::array<double, 3>& means, const std::array<double, 3>& stds);

Tensor denormalize(const Tensor& t, const std::array<double, 3>& means, const std::array<double, 3>& stds);

/// Draws the rotation angle then the flip decision from rng.
Tensor train_transform(const GrayImage& img, Rng& rng, const TransformConfig& cfg = {});

Tensor eval_transform(const GrayImage& img, const TransformConfig& cfg = {});

}  // namespace cxraug
