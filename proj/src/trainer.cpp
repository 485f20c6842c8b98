/**
 * @file trainer.cpp
 * @brief Softmax head, Adam and the minibatch training loop
 */
#include "cxraug/trainer.hpp"
#include "cxraug/error.hpp"
#include "cxraug/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cxraug {

namespace {

constexpr double kProbFloor = 1e-12;

void check_dataset(std::span<const FeatureVector> samples) {
    if (samples.empty()) {
        throw InvalidArgument("training set is empty");
    }
    const std::size_t dim = samples.front().values.size();
    if (dim == 0) {
        throw InvalidArgument("feature vectors are empty");
    }
    for (const auto& s : samples) {
        if (s.values.size() != dim) {
            throw InvalidArgument("inconsistent feature dimension for '" + s.id + "': " +
                                  std::to_string(s.values.size()) + " vs " + std::to_string(dim));
        }
        if (!std::all_of(s.values.begin(), s.values.end(), [](double v) { return std::isfinite(v); })) {
            throw InvalidArgument("non-finite feature value in '" + s.id + "'");
        }
    }
}

}  // namespace

void TrainConfig::validate() const {
    if (!(lr0 > 0.0)) throw InvalidArgument("initial learning rate must be positive");
    if (batch_size < 1) throw InvalidArgument("batch size must be >= 1");
    if (epochs < 1) throw InvalidArgument("epoch count must be >= 1");
    if (!(decay_factor > 0.0 && decay_factor < 1.0)) throw InvalidArgument("decay factor must lie in (0, 1)");
    if (patience_epochs < 1) throw InvalidArgument("patience must be >= 1 epoch");
}

std::array<double, 2> LinearHead::logits(std::span<const double> x) const {
    if (x.size() != dim_) {
        throw InvalidArgument("feature dimension " + std::to_string(x.size()) + " does not match head dimension " +
                              std::to_string(dim_));
    }
    std::array<double, 2> z = {bias(0), bias(1)};
    for (std::size_t d = 0; d < dim_; ++d) {
        z[0] += weight(d, 0) * x[d];
        z[1] += weight(d, 1) * x[d];
    }
    return z;
}

std::array<double, 2> softmax(const std::array<double, 2>& logits) {
    if (!std::isfinite(logits[0]) || !std::isfinite(logits[1])) {
        throw InvalidArgument("softmax received a non-finite logit");
    }
    const double top = std::max(logits[0], logits[1]);
    const double e0 = std::exp(logits[0] - top);
    const double e1 = std::exp(logits[1] - top);
    const double sum = e0 + e1;
    return {e0 / sum, e1 / sum};
}

double cross_entropy(const std::array<double, 2>& probs, Label label) {
    return -std::log(std::max(probs[static_cast<std::size_t>(label)], kProbFloor));
}

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state, double lr) {
    if (grads.size() != params.size() || state.m.size() != params.size() || state.v.size() != params.size()) {
        throw InvalidArgument("Adam parameter, gradient and moment sizes differ");
    }
    if (!std::all_of(grads.begin(), grads.end(), [](double g) { return std::isfinite(g); })) {
        throw InvalidArgument("non-finite gradient; Adam step rejected");
    }
    ++state.t;
    const double t = static_cast<double>(state.t);
    const double correction1 = 1.0 - std::pow(state.beta1, t);
    const double correction2 = 1.0 - std::pow(state.beta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
        const double m_hat = state.m[i] / correction1;
        const double v_hat = state.v[i] / correction2;
        params[i] -= lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
}

LossGradient loss_and_gradient(const LinearHead& head, std::span<const FeatureVector> samples,
                               std::span<const std::size_t> indices) {
    if (indices.empty()) {
        throw InvalidArgument("empty minibatch");
    }
    const std::size_t dim = head.dim();
    LossGradient out;
    out.grad.assign(head.params().size(), 0.0);
    for (const std::size_t idx : indices) {
        const FeatureVector& s = samples[idx];
        const auto probs = softmax(head.logits(s.values));
        const auto y = static_cast<std::size_t>(s.label);
        out.loss += cross_entropy(probs, s.label);
        if (probs[y] <= kProbFloor) {
            continue;  // clamped region: loss is flat in the parameters
        }
        const std::array<double, 2> dz = {probs[0] - (y == 0 ? 1.0 : 0.0), probs[1] - (y == 1 ? 1.0 : 0.0)};
        for (std::size_t d = 0; d < dim; ++d) {
            out.grad[d * 2] += dz[0] * s.values[d];
            out.grad[d * 2 + 1] += dz[1] * s.values[d];
        }
        out.grad[dim * 2] += dz[0];
        out.grad[dim * 2 + 1] += dz[1];
    }
    const double scale = 1.0 / static_cast<double>(indices.size());
    out.loss *= scale;
    for (auto& g : out.grad) g *= scale;
    return out;
}

LossGradient loss_and_gradient(const LinearHead& head, std::span<const FeatureVector> samples) {
    std::vector<std::size_t> all(samples.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return loss_and_gradient(head, samples, all);
}

double mean_loss(const LinearHead& head, std::span<const FeatureVector> samples) {
    if (samples.empty()) {
        throw InvalidArgument("empty sample set");
    }
    double total = 0.0;
    for (const auto& s : samples) total += cross_entropy(softmax(head.logits(s.values)), s.label);
    return total / static_cast<double>(samples.size());
}

TrainResult train(std::span<const FeatureVector> samples, const TrainConfig& cfg) {
    cfg.validate();
    check_dataset(samples);

    const std::size_t dim = samples.front().values.size();
    Rng rng(cfg.seed);
    TrainResult result{LinearHead(dim), {}};
    const double bound = 1.0 / std::sqrt(static_cast<double>(dim));
    for (std::size_t d = 0; d < dim; ++d) {
        result.head.weight(d, 0) = rng.uniform(-bound, bound);
        result.head.weight(d, 1) = rng.uniform(-bound, bound);
    }

    AdamState adam(result.head.params().size());
    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto batch = static_cast<std::size_t>(cfg.batch_size);

    double lr = cfg.lr0;
    double previous_loss = 0.0;
    int stalled = 0;
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        for (std::size_t i = order.size() - 1; i > 0; --i) {
            std::swap(order[i], order[rng.below(i + 1)]);
        }
        double loss_sum = 0.0;
        for (std::size_t begin = 0; begin < order.size(); begin += batch) {
            const std::size_t end = std::min(begin + batch, order.size());
            const std::span<const std::size_t> idx(order.data() + begin, end - begin);
            const LossGradient lg = loss_and_gradient(result.head, samples, idx);
            loss_sum += lg.loss * static_cast<double>(idx.size());
            adam_step(result.head.params(), lg.grad, adam, lr);
        }
        const double epoch_loss = loss_sum / static_cast<double>(order.size());
        result.log.push_back({epoch, epoch_loss, lr});

        if (epoch > 1 && !(epoch_loss < previous_loss)) {
            if (++stalled >= cfg.patience_epochs) {
                lr *= cfg.decay_factor;
                stalled = 0;
            }
        } else {
            stalled = 0;
        }
        previous_loss = epoch_loss;
    }
    return result;
}

Prediction predict(const LinearHead& head, const FeatureVector& sample) {
    const auto probs = softmax(head.logits(sample.values));
    if (probs[1] > probs[0]) {
        return {Label::covid, probs[1]};
    }
    return {Label::normal, probs[0]};
}

}  // namespace cxraug
