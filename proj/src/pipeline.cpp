/**
 * @file pipeline.cpp
 * @brief Stage implementations behind the command-line subcommands
 */
#include "cxraug/pipeline.hpp"
#include "cxraug/error.hpp"
#include "cxraug/feature_io.hpp"
#include "cxraug/features.hpp"
#include "cxraug/image_io.hpp"
#include "cxraug/report.hpp"
#include "cxraug/text.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <future>
#include <set>

namespace cxraug {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kResultsHeader =
    "epochs,tp,fn,fp,tn,sensitivity,specificity,accuracy,mcc,mcc_degenerate";

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) {
        throw DataError(where + " must be a JSON object");
    }
    const std::set<std::string> known(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) {
            throw DataError("unknown key '" + key + "' in " + where);
        }
    }
}

template <typename T>
void read_key(const json& j, const char* key, T& target) {
    if (j.contains(key)) target = j.at(key).get<T>();
}

std::string optional_cell(const std::optional<double>& v) {
    return v ? format_double(*v) : "NA";
}

struct TrainedEntry {
    int epochs = 0;
    TrainResult trained;
    ResultRow row;
};

fs::path head_path(const RunConfig& cfg, int epochs) {
    return cfg.out_dir / "heads" / ("head_e" + std::to_string(epochs) + ".json");
}

void write_log(const std::vector<EpochLog>& log, const fs::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw DataError("cannot open '" + path.string() + "' for writing");
    }
    out << "epoch,mean_loss,learning_rate\n";
    for (const auto& e : log) {
        out << e.epoch << ',' << format_double(e.mean_loss) << ',' << format_double(e.learning_rate) << '\n';
    }
}

ResultRow evaluate_head(const LinearHead& head, int epochs, const std::vector<FeatureVector>& test) {
    if (test.empty()) {
        throw DataError("the test split is empty; nothing to evaluate");
    }
    std::vector<Label> predicted;
    std::vector<Label> truth;
    predicted.reserve(test.size());
    truth.reserve(test.size());
    for (const auto& f : test) {
        predicted.push_back(predict(head, f).label);
        truth.push_back(f.label);
    }
    return make_row(epochs, confusion(predicted, truth));
}

SplitFeatures load_split(const fs::path& manifest_path, const fs::path& features_path) {
    return split_features(load_manifest(manifest_path), read_features(features_path));
}

// Runs fn(i) for every sweep entry on up to `jobs` threads; results keep sweep order.
template <typename Fn>
auto for_each_sweep(const RunConfig& cfg, Fn fn) {
    using Result = decltype(fn(std::size_t{0}));
    const std::size_t n = cfg.epochs_sweep.size();
    std::vector<Result> out(n);
    const std::size_t jobs = std::max<std::size_t>(1, std::min<std::size_t>(cfg.jobs, n));
    for (std::size_t begin = 0; begin < n; begin += jobs) {
        std::vector<std::future<Result>> pending;
        for (std::size_t i = begin; i < std::min(begin + jobs, n); ++i) {
            pending.push_back(std::async(jobs == 1 ? std::launch::deferred : std::launch::async, fn, i));
        }
        for (std::size_t i = 0; i < pending.size(); ++i) out[begin + i] = pending[i].get();
    }
    return out;
}

std::vector<TrainedEntry> train_sweep(const RunConfig& cfg, const SplitFeatures& data) {
    if (data.train.empty()) {
        throw DataError("the training split is empty");
    }
    return for_each_sweep(cfg, [&](std::size_t i) {
        TrainConfig tc = cfg.train;
        tc.epochs = cfg.epochs_sweep[i];
        TrainedEntry entry;
        entry.epochs = tc.epochs;
        entry.trained = train(data.train, tc);
        return entry;
    });
}

void save_heads(const RunConfig& cfg, const std::vector<TrainedEntry>& entries) {
    fs::create_directories(cfg.out_dir / "heads");
    for (const auto& e : entries) {
        save_head(e.trained.head, head_path(cfg, e.epochs));
        write_log(e.trained.log, cfg.out_dir / "heads" / ("log_e" + std::to_string(e.epochs) + ".csv"));
    }
}

void write_run_record(const RunConfig& cfg, const std::vector<TrainedEntry>& entries) {
    json record;
    record["tool"] = "cxraug";
    record["version"] = kVersion;
    record["seed"] = cfg.seed;
    record["config"] = json::parse(run_config_json(cfg));
    json rows = json::array();
    for (const auto& e : entries) {
        const ResultRow& r = e.row;
        json row = {{"epochs", r.epochs},
                    {"tp", r.cm.tp},
                    {"fn", r.cm.fn},
                    {"fp", r.cm.fp},
                    {"tn", r.cm.tn},
                    {"sensitivity", r.sensitivity ? json(*r.sensitivity) : json(nullptr)},
                    {"specificity", r.specificity ? json(*r.specificity) : json(nullptr)},
                    {"accuracy", r.accuracy},
                    {"mcc", r.mcc.value},
                    {"mcc_degenerate", r.mcc.degenerate}};
        json log = json::array();
        for (const auto& l : e.trained.log) {
            log.push_back({{"epoch", l.epoch}, {"mean_loss", l.mean_loss}, {"learning_rate", l.learning_rate}});
        }
        row["log"] = std::move(log);
        rows.push_back(std::move(row));
    }
    record["rows"] = std::move(rows);
    std::ofstream out(cfg.out_dir / "run_record.json", std::ios::trunc);
    out << record.dump(2) << '\n';
}

}  // namespace

void RunConfig::apply_seed() {
    augment.seed = seed;
    train.seed = seed;
}

void RunConfig::validate() const {
    if (epochs_sweep.empty()) {
        throw InvalidArgument("the epochs sweep is empty");
    }
    for (int e : epochs_sweep) {
        if (e < 1) throw InvalidArgument("sweep epoch counts must be >= 1");
    }
    if (out_dir.empty()) {
        throw InvalidArgument("an output directory is required");
    }
    augment.validate();
    TrainConfig probe = train;
    probe.epochs = epochs_sweep.front();
    probe.validate();
}

RunConfig load_run_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open config '" + path.string() + "'");
    }
    RunConfig cfg;
    try {
        const json j = json::parse(in);
        reject_unknown_keys(j, {"manifest", "out", "features", "seed", "epochs_sweep", "augment_enabled", "jobs",
                                "augment", "train"},
                            "config");
        if (j.contains("manifest")) cfg.manifest = j.at("manifest").get<std::string>();
        if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
        if (j.contains("features") && !j.at("features").is_null()) cfg.features = j.at("features").get<std::string>();
        read_key(j, "seed", cfg.seed);
        read_key(j, "epochs_sweep", cfg.epochs_sweep);
        read_key(j, "augment_enabled", cfg.augment_enabled);
        read_key(j, "jobs", cfg.jobs);
        if (j.contains("augment")) {
            const json& a = j.at("augment");
            reject_unknown_keys(a, {"max_rotation_deg", "width_shift_fraction", "height_shift_fraction",
                                    "horizontal_flip", "target_count", "clahe"},
                                "config.augment");
            read_key(a, "max_rotation_deg", cfg.augment.max_rotation_deg);
            read_key(a, "width_shift_fraction", cfg.augment.width_shift_fraction);
            read_key(a, "height_shift_fraction", cfg.augment.height_shift_fraction);
            read_key(a, "horizontal_flip", cfg.augment.horizontal_flip);
            read_key(a, "target_count", cfg.augment.target_count);
            if (a.contains("clahe")) {
                const json& c = a.at("clahe");
                reject_unknown_keys(c, {"tiles_x", "tiles_y", "clip_fraction", "n_bins"}, "config.augment.clahe");
                read_key(c, "tiles_x", cfg.augment.clahe.tiles_x);
                read_key(c, "tiles_y", cfg.augment.clahe.tiles_y);
                read_key(c, "clip_fraction", cfg.augment.clahe.clip_fraction);
                read_key(c, "n_bins", cfg.augment.clahe.n_bins);
            }
        }
        if (j.contains("train")) {
            const json& t = j.at("train");
            reject_unknown_keys(t, {"lr0", "batch_size", "decay_factor", "patience_epochs"}, "config.train");
            read_key(t, "lr0", cfg.train.lr0);
            read_key(t, "batch_size", cfg.train.batch_size);
            read_key(t, "decay_factor", cfg.train.decay_factor);
            read_key(t, "patience_epochs", cfg.train.patience_epochs);
        }
    } catch (const json::exception& e) {
        throw DataError("malformed config '" + path.string() + "': " + e.what());
    }
    cfg.apply_seed();
    return cfg;
}

std::string run_config_json(const RunConfig& cfg) {
    const json j = {
        {"manifest", cfg.manifest.generic_string()},
        {"out", cfg.out_dir.generic_string()},
        {"features", cfg.features ? json(cfg.features->generic_string()) : json(nullptr)},
        {"seed", cfg.seed},
        {"epochs_sweep", cfg.epochs_sweep},
        {"augment_enabled", cfg.augment_enabled},
        {"jobs", cfg.jobs},
        {"augment",
         {{"max_rotation_deg", cfg.augment.max_rotation_deg},
          {"width_shift_fraction", cfg.augment.width_shift_fraction},
          {"height_shift_fraction", cfg.augment.height_shift_fraction},
          {"horizontal_flip", cfg.augment.horizontal_flip},
          {"target_count", cfg.augment.target_count},
          {"clahe",
           {{"tiles_x", cfg.augment.clahe.tiles_x},
            {"tiles_y", cfg.augment.clahe.tiles_y},
            {"clip_fraction", cfg.augment.clahe.clip_fraction},
            {"n_bins", cfg.augment.clahe.n_bins}}}}},
        {"train",
         {{"lr0", cfg.train.lr0},
          {"batch_size", cfg.train.batch_size},
          {"decay_factor", cfg.train.decay_factor},
          {"patience_epochs", cfg.train.patience_epochs}}}};
    return j.dump(2);
}

ResultRow make_row(int epochs, const ConfusionMatrix& cm) {
    return {epochs, cm, sensitivity(cm), specificity(cm), accuracy(cm), mcc(cm)};
}

void write_results(const std::vector<ResultRow>& rows, const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError("cannot open '" + path.string() + "' for writing");
    }
    out << kResultsHeader << '\n';
    for (const auto& r : rows) {
        out << r.epochs << ',' << r.cm.tp << ',' << r.cm.fn << ',' << r.cm.fp << ',' << r.cm.tn << ','
            << optional_cell(r.sensitivity) << ',' << optional_cell(r.specificity) << ','
            << format_double(r.accuracy) << ',' << format_double(r.mcc.value) << ','
            << (r.mcc.degenerate ? 1 : 0) << '\n';
    }
    if (!out) {
        throw DataError("failed writing '" + path.string() + "'");
    }
}

std::vector<ResultRow> read_results(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open results file '" + path.string() + "'");
    }
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != kResultsHeader) {
        throw DataError("results file '" + path.string() + "' lacks the expected header");
    }
    std::vector<ResultRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty()) continue;
        const std::string where = "results '" + path.string() + "' row " + std::to_string(lineno);
        const auto cells = split_csv_line(line);
        if (cells.size() != 10) {
            throw DataError(where + ": expected 10 fields");
        }
        const auto count = [&](const std::string& cell) -> std::uint64_t {
            const auto v = parse_int(cell);
            if (!v || *v < 0) throw DataError(where + ": bad count '" + cell + "'");
            return static_cast<std::uint64_t>(*v);
        };
        const auto real = [&](const std::string& cell) -> std::optional<double> {
            if (cell == "NA") return std::nullopt;
            const auto v = parse_double(cell);
            if (!v) throw DataError(where + ": bad value '" + cell + "'");
            return v;
        };
        const auto epochs = parse_int(cells[0]);
        if (!epochs || *epochs < 1) throw DataError(where + ": bad epochs '" + cells[0] + "'");
        ResultRow r;
        r.epochs = static_cast<int>(*epochs);
        r.cm = {count(cells[1]), count(cells[2]), count(cells[3]), count(cells[4])};
        r.sensitivity = real(cells[5]);
        r.specificity = real(cells[6]);
        const auto acc = real(cells[7]);
        const auto m = real(cells[8]);
        if (!acc || !m) throw DataError(where + ": accuracy and mcc are required");
        r.accuracy = *acc;
        r.mcc.value = *m;
        if (cells[9] != "0" && cells[9] != "1") throw DataError(where + ": bad mcc_degenerate flag");
        r.mcc.degenerate = cells[9] == "1";
        rows.push_back(r);
    }
    return rows;
}

SplitFeatures split_features(const Manifest& manifest, const std::vector<FeatureVector>& features) {
    const auto& entries = manifest.entries();
    std::vector<const FeatureVector*> by_entry(entries.size(), nullptr);
    for (const auto& f : features) {
        const std::ptrdiff_t idx = manifest.find(f.id);
        if (idx < 0) {
            throw DataError("feature id '" + f.id + "' does not appear in the manifest");
        }
        const ManifestEntry& e = entries[static_cast<std::size_t>(idx)];
        if (e.label != f.label) {
            throw DataError("feature '" + f.id + "' is labelled " + std::string(to_string(f.label)) +
                            " but the manifest says " + std::string(to_string(e.label)));
        }
        if (by_entry[static_cast<std::size_t>(idx)] != nullptr) {
            throw DataError("feature id '" + f.id + "' appears twice");
        }
        by_entry[static_cast<std::size_t>(idx)] = &f;
    }
    SplitFeatures out;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (by_entry[i] == nullptr) {
            throw DataError("no features for manifest entry '" + entries[i].path + "'");
        }
        (entries[i].split == Split::train ? out.train : out.test).push_back(*by_entry[i]);
    }
    return out;
}

fs::path cmd_augment(const RunConfig& cfg) {
    cfg.validate();
    const Manifest manifest = load_manifest(cfg.manifest);
    fs::create_directories(cfg.out_dir);
    const fs::path out_manifest = cfg.out_dir / "manifest.csv";
    if (!cfg.augment_enabled) {
        save_manifest(manifest, out_manifest);
        return out_manifest;
    }

    std::vector<GrayImage> positives;
    for (const auto& e : manifest.entries()) {
        if (e.split == Split::train && e.label == Label::covid) {
            positives.push_back(load_image(manifest.resolve(e)));
        }
    }
    if (positives.empty()) {
        throw DataError("manifest '" + cfg.manifest.string() + "' has no training positives to augment");
    }
    if (static_cast<std::size_t>(cfg.augment.target_count) < positives.size()) {
        throw InvalidArgument("target count " + std::to_string(cfg.augment.target_count) + " is below the " +
                              std::to_string(positives.size()) + " existing training positives");
    }

    const fs::path aug_dir = cfg.out_dir / "augmented";
    fs::remove_all(aug_dir);
    try {
        fs::create_directories(aug_dir);
        const std::vector<GrayImage> balanced = balance_class(positives, cfg.augment, cfg.jobs);
        Manifest result = manifest.rebased(cfg.out_dir);
        for (std::size_t k = positives.size(); k < balanced.size(); ++k) {
            char name[64];
            std::snprintf(name, sizeof name, "augmented/aug_%05zu.png", k);
            save_image(balanced[k], cfg.out_dir / name);
            result.add({name, Label::covid, Split::train});
        }
        save_manifest(result, out_manifest);
    } catch (...) {
        std::error_code ec;
        fs::remove_all(aug_dir, ec);
        fs::remove(out_manifest, ec);
        throw;
    }
    return out_manifest;
}

fs::path cmd_featurize(const RunConfig& cfg, const fs::path& manifest_path) {
    const Manifest manifest = load_manifest(manifest_path);
    fs::create_directories(cfg.out_dir);
    const fs::path out = cfg.out_dir / "features.csv";
    write_features(featurize_manifest(manifest, cfg.jobs), out);
    return out;
}

void cmd_train(const RunConfig& cfg, const fs::path& manifest_path, const fs::path& features_path) {
    cfg.validate();
    save_heads(cfg, train_sweep(cfg, load_split(manifest_path, features_path)));
}

std::vector<ResultRow> cmd_evaluate(const RunConfig& cfg, const fs::path& manifest_path,
                                    const fs::path& features_path) {
    cfg.validate();
    const SplitFeatures data = load_split(manifest_path, features_path);
    std::vector<ResultRow> rows;
    for (int epochs : cfg.epochs_sweep) {
        rows.push_back(evaluate_head(load_head(head_path(cfg, epochs)), epochs, data.test));
    }
    write_results(rows, cfg.out_dir / "results.csv");
    return rows;
}

std::vector<ResultRow> cmd_train_eval(const RunConfig& cfg, const fs::path& manifest_path,
                                      const fs::path& features_path) {
    cfg.validate();
    const SplitFeatures data = load_split(manifest_path, features_path);
    std::vector<TrainedEntry> entries = train_sweep(cfg, data);
    std::vector<ResultRow> rows;
    for (auto& e : entries) {
        e.row = evaluate_head(e.trained.head, e.epochs, data.test);
        rows.push_back(e.row);
    }
    save_heads(cfg, entries);
    write_results(rows, cfg.out_dir / "results.csv");
    write_run_record(cfg, entries);
    return rows;
}

std::vector<ResultRow> run_all(const RunConfig& cfg) {
    cfg.validate();
    const fs::path manifest = cmd_augment(cfg);
    const fs::path features = cfg.features ? *cfg.features : cmd_featurize(cfg, manifest);
    std::vector<ResultRow> rows = cmd_train_eval(cfg, manifest, features);
    cmd_report(cfg.out_dir / "results.csv", cfg.out_dir);
    return rows;
}

}  // namespace cxraug
