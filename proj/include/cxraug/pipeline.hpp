/**
 * @file pipeline.hpp
 * @brief End-to-end orchestration: augment -> featurize -> train -> evaluate -> report
 *
 * Output directory layout:
 *   manifest.csv        manifest after balancing (or a copy when augmentation is off)
 *   augmented/          synthetic positives written by the augment stage
 *   features.csv        baseline features keyed by manifest path
 *   heads/head_eN.json  trained head for the N-epoch sweep entry
 *   heads/log_eN.csv    per-epoch loss and learning rate
 *   results.csv         one row per sweep entry
 *   run_record.json     configuration, seed, version and all rows
 */
#pragma once

#include "cxraug/augment.hpp"
#include "cxraug/manifest.hpp"
#include "cxraug/metrics.hpp"
#include "cxraug/trainer.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace cxraug {

inline constexpr const char* kVersion = "0.1.0";

struct RunConfig {
    std::filesystem::path manifest;
    std::filesystem::path out_dir = "out";
    std::optional<std::filesystem::path> features;  ///< external feature file; baseline extractor otherwise
    AugmentConfig augment;
    TrainConfig train;
    std::vector<int> epochs_sweep = {5, 10, 15, 20, 25};
    bool augment_enabled = true;
    std::uint64_t seed = 0;
    unsigned jobs = 1;

    /// Copies the run seed into the augment and train configs.
    void apply_seed();
    void validate() const;
};

/// Reads a JSON config; absent keys keep their defaults, unknown keys are rejected.
RunConfig load_run_config(const std::filesystem::path& path);
std::string run_config_json(const RunConfig& cfg);

struct ResultRow {
    int epochs = 0;
    ConfusionMatrix cm;
    std::optional<double> sensitivity;
    std::optional<double> specificity;
    double accuracy = 0.0;
    MccResult mcc;
};

ResultRow make_row(int epochs, const ConfusionMatrix& cm);

/// Column order: epochs,tp,fn,fp,tn,sensitivity,specificity,accuracy,mcc,mcc_degenerate.
void write_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path);
std::vector<ResultRow> read_results(const std::filesystem::path& path);

struct SplitFeatures {
    std::vector<FeatureVector> train;
    std::vector<FeatureVector> test;
};

/**
 * Routes features to splits by matching ids against manifest paths. Every
 * manifest entry must be covered and labels must agree.
 */
SplitFeatures split_features(const Manifest& manifest, const std::vector<FeatureVector>& features);

/// Balances the training positives; returns the path of the manifest written to out_dir.
std::filesystem::path cmd_augment(const RunConfig& cfg);

/// Baseline features for every manifest entry.
std::filesystem::path cmd_featurize(const RunConfig& cfg, const std::filesystem::path& manifest_path);

/// Trains one head per sweep entry and saves it under out_dir/heads.
void cmd_train(const RunConfig& cfg, const std::filesystem::path& manifest_path,
               const std::filesystem::path& features_path);

/// Scores saved heads on the test split and writes results.csv.
std::vector<ResultRow> cmd_evaluate(const RunConfig& cfg, const std::filesystem::path& manifest_path,
                                    const std::filesystem::path& features_path);

/// Train and evaluate in memory; writes heads, results.csv and run_record.json.
std::vector<ResultRow> cmd_train_eval(const RunConfig& cfg, const std::filesystem::path& manifest_path,
                                      const std::filesystem::path& features_path);

/// Every stage in sequence, followed by cmd_report on the results.
std::vector<ResultRow> run_all(const RunConfig& cfg);

}  // namespace cxraug
