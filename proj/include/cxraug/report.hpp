/**
 * @file report.hpp
 * @brief Summary table and metric-vs-epochs SVG bar charts
 */
#pragma once

#include "cxraug/pipeline.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace cxraug {

struct ReportFiles {
    std::filesystem::path summary;
    std::vector<std::filesystem::path> charts;  ///< sensitivity, specificity, accuracy, mcc
};

/**
 * Writes summary.csv and sensitivity/specificity/accuracy/mcc .svg into
 * out_dir. Values keep full precision in the CSV; the charts and the
 * summary's display column show two decimals. Nothing is written if the
 * results table is empty or malformed.
 */
ReportFiles cmd_report(const std::filesystem::path& results_path, const std::filesystem::path& out_dir);

/// One chart; missing values render as empty bars labelled "n/a".
std::string bar_chart_svg(const std::string& title, const std::vector<int>& epochs,
                          const std::vector<std::optional<double>>& values, bool percent);

}  // namespace cxraug
