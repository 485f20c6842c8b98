/**
 * @file metrics.hpp
 * @brief Confusion matrix and the four reported classification metrics
 *
 * "covid" is the positive class throughout.
 */
#pragma once

#include "cxraug/image.hpp"

#include <cstdint>
#include <optional>
#include <span>

namespace cxraug {

struct ConfusionMatrix {
    std::uint64_t tp = 0;
    std::uint64_t fn = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;

    std::uint64_t positives() const { return tp + fn; }
    std::uint64_t negatives() const { return fp + tn; }
    std::uint64_t total() const { return tp + fn + fp + tn; }

    /// Same matrix with "normal" treated as the positive class.
    ConfusionMatrix swapped() const { return {tn, fp, fn, tp}; }

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Throws InvalidArgument on empty or unequal-length inputs.
ConfusionMatrix confusion(std::span<const Label> predictions, std::span<const Label> truths);

/// TP / (TP + FN); nullopt when there are no actual positives.
std::optional<double> sensitivity(const ConfusionMatrix& cm);

/// TN / (FP + TN); nullopt when there are no actual negatives.
std::optional<double> specificity(const ConfusionMatrix& cm);

/// (TP + TN) / total. Throws InvalidArgument for an empty matrix.
double accuracy(const ConfusionMatrix& cm);

struct MccResult {
    double value = 0.0;
    bool degenerate = false;  ///< a marginal was zero; value forced to 0
};

MccResult mcc(const ConfusionMatrix& cm);

}  // namespace cxraug
