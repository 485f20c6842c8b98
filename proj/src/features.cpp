/**
 * @file features.cpp
 */
#include "cxraug/features.hpp"
#include "cxraug/image_io.hpp"
#include "cxraug/preprocess.hpp"

#include <algorithm>
#include <exception>
#include <thread>

namespace cxraug {

FeatureVector extract_baseline_features(const GrayImage& img, std::string id, Label label) {
    FeatureVector fv{std::move(id), label, {}};
    fv.values.reserve(kBaselineFeatureDim);
    const GrayImage thumb = resize_bilinear(img, kThumbnailSize, kThumbnailSize);
    for (std::uint8_t p : thumb.pixels()) fv.values.push_back(p / 255.0);

    std::vector<std::uint64_t> hist(kFeatureHistogramBins, 0);
    for (std::uint8_t p : img.pixels()) ++hist[static_cast<std::size_t>(p * kFeatureHistogramBins / 256)];
    const double total = static_cast<double>(img.size());
    for (std::uint64_t c : hist) fv.values.push_back(static_cast<double>(c) / total);
    return fv;
}

std::vector<FeatureVector> featurize_manifest(const Manifest& manifest, unsigned workers) {
    const auto& entries = manifest.entries();
    std::vector<FeatureVector> out(entries.size());
    const auto work = [&](std::size_t i) {
        const ManifestEntry& e = entries[i];
        out[i] = extract_baseline_features(load_image(manifest.resolve(e)), e.path, e.label);
    };
    workers = std::max(1u, workers);
    if (workers == 1) {
        for (std::size_t i = 0; i < entries.size(); ++i) work(i);
        return out;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < entries.size(); i += workers) work(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

}  // namespace cxraug
