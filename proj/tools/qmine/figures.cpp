#include "figures.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qmine/btclass/level.hpp"
#include "qmine/common/errors.hpp"
#include "qmine/corpus/types.hpp"

namespace qmine::cli {

namespace {

constexpr const char* kPalette[7] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2",
                                     "#59a14f", "#edc948", "#b07aa1"};

std::string fmt(double v, int precision = 2) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

void save_svg(const std::string& path, const std::string& body, double width, double height) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write figure: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width, 0) << "\" height=\""
        << fmt(height, 0) << "\" viewBox=\"0 0 " << fmt(width, 0) << " " << fmt(height, 0)
        << "\" font-family=\"sans-serif\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n"
        << body << "</svg>\n";
    if (!out) throw io_error("write failed: " + path);
}

void append_y_axis(std::ostringstream& svg, double left, double top, double plot_h, double plot_w,
                   double ymax, int precision, const std::string& label) {
    for (int i = 0; i <= 4; ++i) {
        double frac = i / 4.0;
        double y = top + plot_h * (1.0 - frac);
        svg << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(y) << "\" x2=\""
            << fmt(left + plot_w) << "\" y2=\"" << fmt(y)
            << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        svg << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(y + 4)
            << "\" font-size=\"11\" text-anchor=\"end\" fill=\"#333333\">"
            << fmt(ymax * frac, precision) << "</text>\n";
    }
    svg << "<text x=\"14\" y=\"" << fmt(top + plot_h / 2)
        << "\" font-size=\"12\" fill=\"#333333\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
        << fmt(top + plot_h / 2) << ")\">" << escape_xml(label) << "</text>\n";
}

}  // namespace

void write_distribution_figure(const std::vector<analysis::DistributionRow>& rows,
                               const std::string& path) {
    std::vector<btclass::BTLevel> levels;
    for (btclass::BTLevel level : btclass::all_bt_levels)
        for (const auto& row : rows)
            if (row.proportions.count(level)) {
                levels.push_back(level);
                break;
            }

    const double bar_w = 18, bar_gap = 3, group_gap = 34;
    const double left = 64, top = 44, bottom = 58, right = 150;
    const double group_w = levels.empty() ? 40 : levels.size() * (bar_w + bar_gap) - bar_gap;
    const double plot_w = std::max<double>(rows.size(), 1) * (group_w + group_gap);
    const double plot_h = 300;
    const double width = left + plot_w + right, height = top + plot_h + bottom;

    double ymax = 1e-9;
    for (const auto& row : rows)
        for (const auto& [level, p] : row.proportions) ymax = std::max(ymax, p);
    ymax *= 1.15;

    std::ostringstream svg;
    svg << "<text x=\"" << fmt(left) << "\" y=\"24\" font-size=\"15\" fill=\"#111111\">"
        << "Question share by subject and cognitive level</text>\n";
    append_y_axis(svg, left, top, plot_h, plot_w, ymax, 3, "share of questions");

    for (size_t g = 0; g < rows.size(); ++g) {
        const auto& row = rows[g];
        double gx = left + g * (group_w + group_gap) + group_gap / 2;
        for (size_t i = 0; i < levels.size(); ++i) {
            auto it = row.proportions.find(levels[i]);
            double p = it == row.proportions.end() ? 0.0 : it->second;
            double h = p / ymax * plot_h;
            double x = gx + i * (bar_w + bar_gap);
            svg << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(top + plot_h - h) << "\" width=\""
                << fmt(bar_w) << "\" height=\"" << fmt(h) << "\" fill=\""
                << kPalette[static_cast<int>(levels[i]) % 7] << "\"/>\n";
        }
        svg << "<text x=\"" << fmt(gx + group_w / 2) << "\" y=\"" << fmt(top + plot_h + 18)
            << "\" font-size=\"11\" text-anchor=\"middle\" fill=\"#333333\">"
            << escape_xml(corpus::subject_name(row.subject)) << "</text>\n";
        svg << "<text x=\"" << fmt(gx + group_w / 2) << "\" y=\"" << fmt(top + plot_h + 34)
            << "\" font-size=\"10\" text-anchor=\"middle\" fill=\"#777777\">n="
            << row.n_questions << "</text>\n";
    }

    for (size_t i = 0; i < levels.size(); ++i) {
        double y = top + 16.0 * i;
        svg << "<rect x=\"" << fmt(left + plot_w + 16) << "\" y=\"" << fmt(y)
            << "\" width=\"12\" height=\"12\" fill=\"" << kPalette[static_cast<int>(levels[i]) % 7]
            << "\"/>\n";
        svg << "<text x=\"" << fmt(left + plot_w + 34) << "\" y=\"" << fmt(y + 10)
            << "\" font-size=\"11\" fill=\"#333333\">" << escape_xml(bt_level_name(levels[i]))
            << "</text>\n";
    }
    save_svg(path, svg.str(), width, height);
}

void write_engagement_figure(const std::vector<analysis::EngagementRow>& rows,
                             const std::string& path) {
    const double bar_w = 26, bar_gap = 4, group_gap = 38;
    const double left = 84, top = 44, bottom = 58, right = 170;
    const double group_w = 2 * bar_w + bar_gap;
    const double plot_w = std::max<double>(rows.size(), 1) * (group_w + group_gap);
    const double plot_h = 300;
    const double width = left + plot_w + right, height = top + plot_h + bottom;

    double ymax = 1e-12;
    for (const auto& row : rows)
        ymax = std::max({ymax, row.mean_like_rate, row.mean_reply_rate});
    ymax *= 1.15;

    const char* like_color = "#4e79a7";
    const char* reply_color = "#f28e2b";

    std::ostringstream svg;
    svg << "<text x=\"" << fmt(left) << "\" y=\"24\" font-size=\"15\" fill=\"#111111\">"
        << "Mean engagement rate by cognitive level</text>\n";
    append_y_axis(svg, left, top, plot_h, plot_w, ymax, 6, "mean rate per view");

    for (size_t g = 0; g < rows.size(); ++g) {
        const auto& row = rows[g];
        double gx = left + g * (group_w + group_gap) + group_gap / 2;
        double hl = row.mean_like_rate / ymax * plot_h;
        double hr = row.mean_reply_rate / ymax * plot_h;
        svg << "<rect x=\"" << fmt(gx) << "\" y=\"" << fmt(top + plot_h - hl) << "\" width=\""
            << fmt(bar_w) << "\" height=\"" << fmt(hl) << "\" fill=\"" << like_color << "\"/>\n";
        svg << "<rect x=\"" << fmt(gx + bar_w + bar_gap) << "\" y=\"" << fmt(top + plot_h - hr)
            << "\" width=\"" << fmt(bar_w) << "\" height=\"" << fmt(hr) << "\" fill=\""
            << reply_color << "\"/>\n";
        svg << "<text x=\"" << fmt(gx + group_w / 2) << "\" y=\"" << fmt(top + plot_h + 18)
            << "\" font-size=\"11\" text-anchor=\"middle\" fill=\"#333333\">"
            << escape_xml(bt_level_name(row.bt_class)) << "</text>\n";
        svg << "<text x=\"" << fmt(gx + group_w / 2) << "\" y=\"" << fmt(top + plot_h + 34)
            << "\" font-size=\"10\" text-anchor=\"middle\" fill=\"#777777\">n=" << row.n_questions
            << "</text>\n";
    }

    svg << "<rect x=\"" << fmt(left + plot_w + 16) << "\" y=\"" << fmt(top)
        << "\" width=\"12\" height=\"12\" fill=\"" << like_color << "\"/>\n"
        << "<text x=\"" << fmt(left + plot_w + 34) << "\" y=\"" << fmt(top + 10)
        << "\" font-size=\"11\" fill=\"#333333\">mean likes per view</text>\n"
        << "<rect x=\"" << fmt(left + plot_w + 16) << "\" y=\"" << fmt(top + 18)
        << "\" width=\"12\" height=\"12\" fill=\"" << reply_color << "\"/>\n"
        << "<text x=\"" << fmt(left + plot_w + 34) << "\" y=\"" << fmt(top + 28)
        << "\" font-size=\"11\" fill=\"#333333\">mean replies per view</text>\n";
    save_svg(path, svg.str(), width, height);
}

void write_confusion_figure(const std::vector<std::string>& class_names,
                            const std::vector<std::vector<int64_t>>& counts,
                            const std::string& path) {
    if (class_names.empty() || counts.size() != class_names.size())
        throw input_error("confusion figure needs a square matrix with matching class names");
    for (const auto& row : counts)
        if (row.size() != class_names.size())
            throw input_error("confusion figure needs a square matrix with matching class names");

    const size_t n = class_names.size();
    const double cell = 52, left = 140, top = 120, right = 30, bottom = 40;
    const double width = left + n * cell + right, height = top + n * cell + bottom;

    int64_t max_count = 1;
    for (const auto& row : counts)
        for (int64_t v : row) max_count = std::max(max_count, v);

    std::ostringstream svg;
    svg << "<text x=\"16\" y=\"24\" font-size=\"15\" fill=\"#111111\">"
        << "Confusion matrix (rows: gold, columns: predicted)</text>\n";

    for (size_t p = 0; p < n; ++p) {
        double x = left + p * cell + cell / 2;
        svg << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(top - 8)
            << "\" font-size=\"11\" fill=\"#333333\" text-anchor=\"start\" transform=\"rotate(-45 "
            << fmt(x) << " " << fmt(top - 8) << ")\">" << escape_xml(class_names[p]) << "</text>\n";
    }
    for (size_t g = 0; g < n; ++g) {
        svg << "<text x=\"" << fmt(left - 8) << "\" y=\"" << fmt(top + g * cell + cell / 2 + 4)
            << "\" font-size=\"11\" fill=\"#333333\" text-anchor=\"end\">"
            << escape_xml(class_names[g]) << "</text>\n";
        for (size_t p = 0; p < n; ++p) {
            double v = static_cast<double>(counts[g][p]) / static_cast<double>(max_count);
            int r = static_cast<int>(255 + v * (33 - 255));
            int gr = static_cast<int>(255 + v * (102 - 255));
            int b = static_cast<int>(255 + v * (172 - 255));
            svg << "<rect x=\"" << fmt(left + p * cell) << "\" y=\"" << fmt(top + g * cell)
                << "\" width=\"" << fmt(cell) << "\" height=\"" << fmt(cell) << "\" fill=\"rgb("
                << r << "," << gr << "," << b << ")\" stroke=\"#ffffff\"/>\n";
            svg << "<text x=\"" << fmt(left + p * cell + cell / 2) << "\" y=\""
                << fmt(top + g * cell + cell / 2 + 4)
                << "\" font-size=\"12\" text-anchor=\"middle\" fill=\""
                << (v > 0.5 ? "#ffffff" : "#222222") << "\">" << counts[g][p] << "</text>\n";
        }
    }
    save_svg(path, svg.str(), width, height);
}

}  // namespace qmine::cli
