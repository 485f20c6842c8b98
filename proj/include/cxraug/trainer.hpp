/**
 * @file trainer.hpp
 * @brief Two-class softmax head over frozen features, trained with Adam
 *
 * The backbone is frozen, so fine-tuning reduces to fitting the replaced
 * final layer: logits = W^T x + b with W of shape D x 2, softmax, and mean
 * cross-entropy per minibatch.
 */
#pragma once

#include "cxraug/image.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cxraug {

struct FeatureVector {
    std::string id;
    Label label = Label::normal;
    std::vector<double> values;
};

/**
 * Final linear layer. Parameters live in one flat buffer: D x 2 weights
 * (row d holds the two class weights of feature d), then the two biases.
 */
class LinearHead {
public:
    LinearHead() = default;
    explicit LinearHead(std::size_t dim) : dim_(dim), params_(dim * 2 + 2, 0.0) {}

    std::size_t dim() const { return dim_; }

    double weight(std::size_t feature, int cls) const { return params_[feature * 2 + static_cast<std::size_t>(cls)]; }
    double& weight(std::size_t feature, int cls) { return params_[feature * 2 + static_cast<std::size_t>(cls)]; }
    double bias(int cls) const { return params_[dim_ * 2 + static_cast<std::size_t>(cls)]; }
    double& bias(int cls) { return params_[dim_ * 2 + static_cast<std::size_t>(cls)]; }

    std::span<double> params() { return params_; }
    std::span<const double> params() const { return params_; }

    /// Throws InvalidArgument on a dimension mismatch.
    std::array<double, 2> logits(std::span<const double> x) const;

    friend bool operator==(const LinearHead&, const LinearHead&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<double> params_;
};

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    std::uint64_t t = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    AdamState() = default;
    explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

struct TrainConfig {
    double lr0 = 0.01;
    int batch_size = 16;
    int epochs = 25;
    double decay_factor = 0.01;
    int patience_epochs = 4;
    std::uint64_t seed = 0;

    void validate() const;
};

struct EpochLog {
    int epoch = 0;
    double mean_loss = 0.0;
    double learning_rate = 0.0;
};

struct TrainResult {
    LinearHead head;
    std::vector<EpochLog> log;
};

struct Prediction {
    Label label = Label::normal;
    double probability = 0.0;
};

/// Numerically stable two-way softmax. Throws InvalidArgument on non-finite logits.
std::array<double, 2> softmax(const std::array<double, 2>& logits);

/// -ln(max(p[label], 1e-12)).
double cross_entropy(const std::array<double, 2>& probs, Label label);

/**
 * Bias-corrected Adam update. Rejects (InvalidArgument) non-finite gradients
 * or a size mismatch before touching params or state.
 */
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state, double lr);

struct LossGradient {
    double loss = 0.0;
    std::vector<double> grad;  ///< Same layout as LinearHead::params().
};

/// Mean cross-entropy over samples[indices] and its analytic gradient.
LossGradient loss_and_gradient(const LinearHead& head, std::span<const FeatureVector> samples,
                               std::span<const std::size_t> indices);

LossGradient loss_and_gradient(const LinearHead& head, std::span<const FeatureVector> samples);

double mean_loss(const LinearHead& head, std::span<const FeatureVector> samples);

/**
 * Weights start uniform in [-1/sqrt(D), 1/sqrt(D)], biases at zero. Every
 * epoch reshuffles, walks minibatches (the last may be short) and applies one
 * Adam step per batch. When the epoch's mean loss fails to decrease for
 * patience_epochs consecutive epochs, the rate is multiplied by decay_factor
 * and the count restarts.
 */
TrainResult train(std::span<const FeatureVector> samples, const TrainConfig& cfg);

/// argmax of the softmax; an exact tie goes to normal.
Prediction predict(const LinearHead& head, const FeatureVector& sample);

}  // namespace cxraug
