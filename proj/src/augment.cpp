/**
 * @file augment.cpp
 * @brief Augmentation chain and round-robin class balancing
 */
#include "cxraug/augment.hpp"
#include "cxraug/error.hpp"
#include "cxraug/geometry.hpp"

#include <optional>
#include <string>
#include <thread>

namespace cxraug {

void AugmentConfig::validate() const {
    if (!(max_rotation_deg >= 0.0 && max_rotation_deg < 360.0)) {
        throw InvalidArgument("max rotation must lie in [0, 360) degrees");
    }
    if (!(width_shift_fraction >= 0.0 && width_shift_fraction < 1.0) ||
        !(height_shift_fraction >= 0.0 && height_shift_fraction < 1.0)) {
        throw InvalidArgument("shift fractions must lie in [0, 1)");
    }
    if (target_count < 1) {
        throw InvalidArgument("target count must be >= 1");
    }
    clahe.validate();
}

GrayImage augment_one(const GrayImage& img, const AugmentConfig& cfg, Rng& rng) {
    const double angle = rng.uniform(-cfg.max_rotation_deg, cfg.max_rotation_deg);
    const double dx = rng.uniform(-cfg.width_shift_fraction, cfg.width_shift_fraction);
    const double dy = rng.uniform(-cfg.height_shift_fraction, cfg.height_shift_fraction);
    const bool flip = rng.bernoulli(0.5) && cfg.horizontal_flip;

    GrayImage out = translate(rotate(img, angle), dx, dy);
    if (flip) {
        out = hflip(out);
    }
    return clahe(out, cfg.clahe);
}

std::vector<GrayImage> balance_class(const std::vector<GrayImage>& imgs, const AugmentConfig& cfg, unsigned workers) {
    if (imgs.empty()) {
        throw InvalidArgument("cannot balance an empty image list");
    }
    cfg.validate();
    const std::size_t n = imgs.size();
    const auto target = static_cast<std::size_t>(cfg.target_count);
    if (target < n) {
        throw InvalidArgument("target count " + std::to_string(target) + " is below the input count " +
                              std::to_string(n));
    }

    std::vector<std::optional<GrayImage>> slots(target);
    for (std::size_t k = 0; k < n; ++k) slots[k] = imgs[k];

    const auto generate = [&](std::size_t k) {
        Rng rng(cfg.seed ^ static_cast<std::uint64_t>(k));
        slots[k] = augment_one(imgs[(k - n) % n], cfg, rng);
    };

    workers = std::max(1u, workers);
    if (workers == 1 || target - n < 2) {
        for (std::size_t k = n; k < target; ++k) generate(k);
    } else {
        std::vector<std::exception_ptr> errors(workers);
        {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    try {
                        for (std::size_t k = n + w; k < target; k += workers) generate(k);
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
            }
        }
        for (const auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    std::vector<GrayImage> out;
    out.reserve(target);
    for (auto& slot : slots) out.push_back(std::move(*slot));
    return out;
}

}  // namespace cxraug
