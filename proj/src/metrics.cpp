/**
 * @file metrics.cpp
 */
#include "cxraug/metrics.hpp"
#include "cxraug/error.hpp"

#include <algorithm>
#include <cmath>

namespace cxraug {

ConfusionMatrix confusion(std::span<const Label> predictions, std::span<const Label> truths) {
    if (predictions.size() != truths.size()) {
        throw InvalidArgument("prediction and ground-truth lists differ in length");
    }
    if (predictions.empty()) {
        throw InvalidArgument("cannot build a confusion matrix from empty lists");
    }
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const bool predicted = predictions[i] == Label::covid;
        const bool actual = truths[i] == Label::covid;
        if (actual) {
            ++(predicted ? cm.tp : cm.fn);
        } else {
            ++(predicted ? cm.fp : cm.tn);
        }
    }
    return cm;
}

std::optional<double> sensitivity(const ConfusionMatrix& cm) {
    if (cm.positives() == 0) return std::nullopt;
    return static_cast<double>(cm.tp) / static_cast<double>(cm.positives());
}

std::optional<double> specificity(const ConfusionMatrix& cm) {
    if (cm.negatives() == 0) return std::nullopt;
    return static_cast<double>(cm.tn) / static_cast<double>(cm.negatives());
}

double accuracy(const ConfusionMatrix& cm) {
    if (cm.total() == 0) {
        throw InvalidArgument("accuracy of an empty confusion matrix is undefined");
    }
    return static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
}

MccResult mcc(const ConfusionMatrix& cm) {
    const double tp = static_cast<double>(cm.tp);
    const double fn = static_cast<double>(cm.fn);
    const double fp = static_cast<double>(cm.fp);
    const double tn = static_cast<double>(cm.tn);
    const double a = tp + fp;
    const double b = tp + fn;
    const double c = tn + fp;
    const double d = tn + fn;
    if (a == 0.0 || b == 0.0 || c == 0.0 || d == 0.0) {
        return {0.0, true};
    }
    // sqrt of each pair keeps the product inside double range for large counts
    const double value = (tp * tn - fp * fn) / (std::sqrt(a * b) * std::sqrt(c * d));
    return {std::clamp(value, -1.0, 1.0), false};
}

}  // namespace cxraug
