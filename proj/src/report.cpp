/**
 * @file report.cpp
 * @brief Summary CSV and SVG bar charts
 */
#include "cxraug/report.hpp"
#include "cxraug/error.hpp"
#include "cxraug/text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cxraug {

namespace fs = std::filesystem;

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 400;
constexpr int kLeft = 70;
constexpr int kRight = 20;
constexpr int kTop = 50;
constexpr int kBottom = 60;

struct MetricSeries {
    std::string name;
    std::string title;
    bool percent;
    std::vector<std::optional<double>> values;
};

std::string display(const std::optional<double>& v, bool percent) {
    if (!v) return "n/a";
    return percent ? format_fixed(*v * 100.0, 2) + "%" : format_fixed(*v, 2);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError("cannot open '" + path.string() + "' for writing");
    }
    out << text;
}

}  // namespace

std::string bar_chart_svg(const std::string& title, const std::vector<int>& epochs,
                          const std::vector<std::optional<double>>& values, bool percent) {
    double lowest = 0.0;
    double highest = 1.0;
    for (const auto& v : values) {
        if (!v) continue;
        lowest = std::min(lowest, *v);
        highest = std::max(highest, *v);
    }
    const double axis_min = std::floor(lowest * 10.0) / 10.0;
    const double axis_max = std::ceil(highest * 10.0) / 10.0;
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    const auto y_of = [&](double v) { return kTop + plot_h * (axis_max - v) / (axis_max - axis_min); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" data-axis-min=\"" << format_double(axis_min)
        << "\" data-axis-max=\"" << format_double(axis_max) << "\">\n";
    svg << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "  <text x=\"" << kWidth / 2 << "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"18\">"
        << title << "</text>\n";

    const int ticks = static_cast<int>(std::lround((axis_max - axis_min) * 10.0));
    const int tick_step = ticks > 10 ? 2 : 1;
    for (int t = 0; t <= ticks; t += tick_step) {
        const double v = axis_min + t / 10.0;
        const double y = y_of(v);
        svg << "  <line x1=\"" << kLeft << "\" y1=\"" << format_fixed(y, 2) << "\" x2=\"" << kWidth - kRight
            << "\" y2=\"" << format_fixed(y, 2) << "\" stroke=\"#dddddd\"/>\n";
        svg << "  <text x=\"" << kLeft - 8 << "\" y=\"" << format_fixed(y + 4, 2)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << (percent ? format_fixed(v * 100.0, 0) + "%" : format_fixed(v, 1)) << "</text>\n";
    }
    const double zero_y = y_of(0.0);
    svg << "  <line x1=\"" << kLeft << "\" y1=\"" << format_fixed(zero_y, 2) << "\" x2=\"" << kWidth - kRight
        << "\" y2=\"" << format_fixed(zero_y, 2) << "\" stroke=\"black\"/>\n";

    const double slot = plot_w / static_cast<double>(std::max<std::size_t>(values.size(), 1));
    const double bar_w = slot * 0.6;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double x = kLeft + slot * static_cast<double>(i) + (slot - bar_w) / 2.0;
        const double v = values[i].value_or(0.0);
        const double top = std::min(y_of(v), zero_y);
        const double height = std::abs(y_of(v) - zero_y);
        svg << "  <rect class=\"bar\" data-epochs=\"" << epochs[i] << "\" data-value=\""
            << (values[i] ? format_double(*values[i]) : std::string("NA")) << "\" x=\"" << format_fixed(x, 2)
            << "\" y=\"" << format_fixed(top, 2) << "\" width=\"" << format_fixed(bar_w, 2) << "\" height=\""
            << format_fixed(height, 2) << "\" fill=\"#4472c4\"/>\n";
        svg << "  <text x=\"" << format_fixed(x + bar_w / 2.0, 2) << "\" y=\"" << format_fixed(top - 6, 2)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << display(values[i], percent) << "</text>\n";
        svg << "  <text x=\"" << format_fixed(x + bar_w / 2.0, 2) << "\" y=\"" << kHeight - kBottom + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << epochs[i]
            << "</text>\n";
    }
    svg << "  <text x=\"" << kLeft + static_cast<int>(plot_w / 2) << "\" y=\"" << kHeight - 14
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">Epochs</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

ReportFiles cmd_report(const fs::path& results_path, const fs::path& out_dir) {
    const std::vector<ResultRow> rows = read_results(results_path);
    if (rows.empty()) {
        throw DataError("results file '" + results_path.string() + "' has no rows");
    }

    std::vector<int> epochs;
    std::vector<MetricSeries> series = {{"sensitivity", "Sensitivity", true, {}},
                                        {"specificity", "Specificity", true, {}},
                                        {"accuracy", "Accuracy", true, {}},
                                        {"mcc", "MCC", false, {}}};
    for (const auto& r : rows) {
        epochs.push_back(r.epochs);
        series[0].values.push_back(r.sensitivity);
        series[1].values.push_back(r.specificity);
        series[2].values.push_back(r.accuracy);
        series[3].values.push_back(r.mcc.value);
    }

    std::ostringstream summary;
    summary << "metric,epochs,value,display\n";
    for (const auto& s : series) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            summary << s.name << ',' << epochs[i] << ','
                    << (s.values[i] ? format_double(*s.values[i]) : std::string("NA")) << ','
                    << display(s.values[i], s.percent) << '\n';
        }
    }

    // Render everything before touching the filesystem.
    std::vector<std::string> charts;
    for (const auto& s : series) charts.push_back(bar_chart_svg(s.title, epochs, s.values, s.percent));

    fs::create_directories(out_dir);
    ReportFiles files;
    files.summary = out_dir / "summary.csv";
    write_text(files.summary, summary.str());
    for (std::size_t i = 0; i < series.size(); ++i) {
        files.charts.push_back(out_dir / (series[i].name + ".svg"));
        write_text(files.charts.back(), charts[i]);
    }
    return files;
}

}  // namespace cxraug
