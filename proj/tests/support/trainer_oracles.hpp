/**
 * @file trainer_oracles.hpp
 * @brief Independent loss / gradient references and the separable toy set
 */
#pragma once

#include "cxraug/trainer.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace cxraug::testing {

/// Mean softmax cross-entropy computed from the flat parameter layout via log-sum-exp.
inline double reference_loss(const std::vector<double>& params, std::size_t dim,
                             const std::vector<FeatureVector>& batch) {
    double total = 0.0;
    for (const auto& s : batch) {
        double z[2] = {params[dim * 2], params[dim * 2 + 1]};
        for (std::size_t d = 0; d < dim; ++d) {
            z[0] += params[d * 2] * s.values[d];
            z[1] += params[d * 2 + 1] * s.values[d];
        }
        const double top = std::max(z[0], z[1]);
        const double lse = top + std::log(std::exp(z[0] - top) + std::exp(z[1] - top));
        total += lse - z[static_cast<int>(s.label)];
    }
    return total / static_cast<double>(batch.size());
}

/// Central finite-difference gradient of reference_loss.
inline std::vector<double> finite_difference_gradient(std::vector<double> params, std::size_t dim,
                                                      const std::vector<FeatureVector>& batch, double h = 1e-5) {
    std::vector<double> grad(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double saved = params[i];
        params[i] = saved + h;
        const double up = reference_loss(params, dim, batch);
        params[i] = saved - h;
        const double down = reference_loss(params, dim, batch);
        params[i] = saved;
        grad[i] = (up - down) / (2.0 * h);
    }
    return grad;
}

/// 20 two-dimensional points, ten per class, separated by the line x + y = 0 with margin.
inline std::vector<FeatureVector> separable_set() {
    const double covid[10][2] = {{1.2, 0.9}, {0.8, 1.5}, {2.0, 0.4}, {1.6, 1.1}, {0.6, 0.9},
                                 {1.0, 2.1}, {2.3, 1.3}, {0.4, 1.4}, {1.8, 0.2}, {1.3, 1.7}};
    const double normal[10][2] = {{-1.1, -0.8}, {-0.7, -1.6}, {-2.1, -0.3}, {-1.5, -1.2}, {-0.5, -1.0},
                                  {-1.2, -1.9}, {-2.2, -1.4}, {-0.3, -1.5}, {-1.9, -0.1}, {-1.4, -1.6}};
    std::vector<FeatureVector> out;
    for (int i = 0; i < 10; ++i) {
        out.push_back({"c" + std::to_string(i), Label::covid, {covid[i][0], covid[i][1]}});
        out.push_back({"n" + std::to_string(i), Label::normal, {normal[i][0], normal[i][1]}});
    }
    return out;
}

/**
 * Exhaustive grid search over logistic-regression parameters (w1, w2, b) on
 * [-3, 3] in steps of 0.25. Returns the best training accuracy found.
 */
inline double grid_logistic_best_accuracy(const std::vector<FeatureVector>& data) {
    double best = 0.0;
    for (int i = -12; i <= 12; ++i) {
        for (int j = -12; j <= 12; ++j) {
            for (int k = -12; k <= 12; ++k) {
                const double w1 = i * 0.25, w2 = j * 0.25, b = k * 0.25;
                int correct = 0;
                for (const auto& s : data) {
                    const double z = w1 * s.values[0] + w2 * s.values[1] + b;
                    const bool covid = 1.0 / (1.0 + std::exp(-z)) > 0.5;
                    correct += covid == (s.label == Label::covid);
                }
                best = std::max(best, static_cast<double>(correct) / static_cast<double>(data.size()));
            }
        }
    }
    return best;
}

inline double training_accuracy(const LinearHead& head, const std::vector<FeatureVector>& data) {
    int correct = 0;
    for (const auto& s : data) correct += predict(head, s).label == s.label;
    return static_cast<double>(correct) / static_cast<double>(data.size());
}

/// Random head and batch for gradient checks.
inline std::pair<LinearHead, std::vector<FeatureVector>> random_problem(std::size_t dim, std::size_t batch,
                                                                         std::mt19937_64& gen) {
    std::normal_distribution<double> normal(0.0, 1.0);
    LinearHead head(dim);
    for (double& p : head.params()) p = normal(gen);
    std::vector<FeatureVector> samples;
    for (std::size_t i = 0; i < batch; ++i) {
        FeatureVector fv{"s" + std::to_string(i), gen() % 2 ? Label::covid : Label::normal, {}};
        for (std::size_t d = 0; d < dim; ++d) fv.values.push_back(normal(gen));
        samples.push_back(std::move(fv));
    }
    return {head, samples};
}

}  // namespace cxraug::testing
