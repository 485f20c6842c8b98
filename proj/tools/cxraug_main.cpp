/**
 * @file cxraug_main.cpp
 * @brief Command-line front end
 *
 * Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
 */
#include "cxraug/error.hpp"
#include "cxraug/features.hpp"
#include "cxraug/pipeline.hpp"
#include "cxraug/report.hpp"
#include "cxraug/text.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace {

namespace fs = std::filesystem;
using namespace cxraug;

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

struct Flags {
    std::string config;
    std::string manifest;
    std::string out;
    std::uint64_t seed = 0;
    std::string epochs;
    bool no_augment = false;
    double clip_limit = 0.0;
    std::string tiles;
    std::string features;
    int target = 0;
    unsigned jobs = 1;
    std::string results;
};

struct Options {
    CLI::Option* config = nullptr;
    CLI::Option* manifest = nullptr;
    CLI::Option* out = nullptr;
    CLI::Option* seed = nullptr;
    CLI::Option* epochs = nullptr;
    CLI::Option* no_augment = nullptr;
    CLI::Option* clip_limit = nullptr;
    CLI::Option* tiles = nullptr;
    CLI::Option* features = nullptr;
    CLI::Option* target = nullptr;
    CLI::Option* jobs = nullptr;
};

Options add_run_options(CLI::App& cmd, Flags& f) {
    Options o;
    o.config = cmd.add_option("--config", f.config, "JSON run configuration; flags override its values");
    o.manifest = cmd.add_option("--manifest", f.manifest, "dataset manifest CSV (path,label,split)");
    o.out = cmd.add_option("--out", f.out, "output directory");
    o.seed = cmd.add_option("--seed", f.seed, "seed for augmentation and training");
    o.epochs = cmd.add_option("--epochs", f.epochs, "comma-separated epoch sweep, e.g. 5,10,15,20,25");
    o.no_augment = cmd.add_flag("--no-augment", f.no_augment, "skip CLAHE balancing of training positives");
    o.clip_limit = cmd.add_option("--clip-limit", f.clip_limit, "CLAHE clip fraction in (0, 1]");
    o.tiles = cmd.add_option("--tiles", f.tiles, "CLAHE tile grid, N or WxH");
    o.features = cmd.add_option("--features", f.features, "feature file (CSV or FVEC) keyed by manifest path");
    o.target = cmd.add_option("--target", f.target, "number of training positives after balancing");
    o.jobs = cmd.add_option("--jobs", f.jobs, "worker threads");
    return o;
}

std::vector<int> parse_epochs(const std::string& text) {
    std::vector<int> out;
    for (const auto& cell : split_csv_line(text)) {
        const auto v = parse_int(cell);
        if (!v || *v < 1 || *v > 100000) {
            throw InvalidArgument("bad --epochs entry '" + cell + "'");
        }
        out.push_back(static_cast<int>(*v));
    }
    return out;
}

void parse_tiles(const std::string& text, ClaheConfig& clahe) {
    const auto x = text.find_first_of("xX");
    const auto tx = parse_int(text.substr(0, x));
    const auto ty = x == std::string::npos ? tx : parse_int(text.substr(x + 1));
    if (!tx || !ty || *tx < 1 || *ty < 1 || *tx > 4096 || *ty > 4096) {
        throw InvalidArgument("bad --tiles value '" + text + "' (expected N or WxH)");
    }
    clahe.tiles_x = static_cast<int>(*tx);
    clahe.tiles_y = static_cast<int>(*ty);
}

RunConfig build_config(const Flags& f, const Options& o) {
    RunConfig cfg = o.config->count() ? load_run_config(f.config) : RunConfig{};
    if (o.manifest->count()) cfg.manifest = f.manifest;
    if (o.out->count()) cfg.out_dir = f.out;
    if (o.seed->count()) cfg.seed = f.seed;
    if (o.epochs->count()) cfg.epochs_sweep = parse_epochs(f.epochs);
    if (o.no_augment->count()) cfg.augment_enabled = false;
    if (o.clip_limit->count()) cfg.augment.clahe.clip_fraction = f.clip_limit;
    if (o.tiles->count()) parse_tiles(f.tiles, cfg.augment.clahe);
    if (o.features->count()) cfg.features = f.features;
    if (o.target->count()) cfg.augment.target_count = f.target;
    if (o.jobs->count()) cfg.jobs = f.jobs;
    cfg.apply_seed();
    cfg.validate();
    return cfg;
}

fs::path require_manifest(const RunConfig& cfg) {
    if (cfg.manifest.empty()) {
        throw InvalidArgument("--manifest is required");
    }
    return cfg.manifest;
}

fs::path features_or_default(const RunConfig& cfg) {
    return cfg.features ? *cfg.features : cfg.out_dir / "features.csv";
}

void print_rows(const std::vector<ResultRow>& rows) {
    const auto pct = [](const std::optional<double>& v) { return v ? format_fixed(*v * 100.0, 2) + "%" : "n/a"; };
    std::cout << "epochs  tp  fn  fp  tn  sensitivity  specificity  accuracy  mcc\n";
    for (const auto& r : rows) {
        std::cout << r.epochs << "  " << r.cm.tp << "  " << r.cm.fn << "  " << r.cm.fp << "  " << r.cm.tn << "  "
                  << pct(r.sensitivity) << "  " << pct(r.specificity) << "  " << pct(r.accuracy) << "  "
                  << format_fixed(r.mcc.value, 2) << (r.mcc.degenerate ? " (degenerate)" : "") << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CLAHE-augmented last-layer transfer learning for chest X-ray classification"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("cxraug ") + kVersion);

    Flags f;
    CLI::App* augment = app.add_subcommand("augment", "balance training positives with CLAHE augmentation");
    CLI::App* featurize = app.add_subcommand("featurize", "compute baseline features for a manifest");
    CLI::App* train = app.add_subcommand("train", "train one head per sweep entry");
    CLI::App* evaluate = app.add_subcommand("evaluate", "score trained heads on the test split");
    CLI::App* report = app.add_subcommand("report", "summary CSV and metric charts from a results file");
    CLI::App* run_all_cmd = app.add_subcommand("run-all", "augment, featurize, train, evaluate and report");

    const Options o_augment = add_run_options(*augment, f);
    const Options o_featurize = add_run_options(*featurize, f);
    const Options o_train = add_run_options(*train, f);
    const Options o_evaluate = add_run_options(*evaluate, f);
    const Options o_run_all = add_run_options(*run_all_cmd, f);
    report->add_option("--results", f.results, "results CSV")->required();
    report->add_option("--out", f.out, "directory for summary.csv and charts")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (augment->parsed()) {
            const RunConfig cfg = build_config(f, o_augment);
            require_manifest(cfg);
            std::cout << "wrote " << cmd_augment(cfg).string() << '\n';
        } else if (featurize->parsed()) {
            const RunConfig cfg = build_config(f, o_featurize);
            std::cout << "wrote " << cmd_featurize(cfg, require_manifest(cfg)).string() << '\n';
        } else if (train->parsed()) {
            const RunConfig cfg = build_config(f, o_train);
            cmd_train(cfg, require_manifest(cfg), features_or_default(cfg));
            std::cout << "wrote heads to " << (cfg.out_dir / "heads").string() << '\n';
        } else if (evaluate->parsed()) {
            const RunConfig cfg = build_config(f, o_evaluate);
            print_rows(cmd_evaluate(cfg, require_manifest(cfg), features_or_default(cfg)));
        } else if (report->parsed()) {
            const ReportFiles files = cmd_report(f.results, f.out);
            std::cout << "wrote " << files.summary.string();
            for (const auto& c : files.charts) std::cout << ' ' << c.string();
            std::cout << '\n';
        } else if (run_all_cmd->parsed()) {
            const RunConfig cfg = build_config(f, o_run_all);
            require_manifest(cfg);
            print_rows(run_all(cfg));
        }
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kData;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kOk;
}
