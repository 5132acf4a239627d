#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mrsim/types.hpp"

namespace mrsim {

// Minimal log-log line chart writer, enough to eyeball bottleneck metrics
// against p without external tooling.
class SvgPlot {
public:
    struct Series {
        std::string label;
        std::string color;
        std::vector<std::pair<double, double>> points;  // (x, y), y > 0
    };

    SvgPlot(std::string title, std::string x_label, std::string y_label)
        : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label))
    {
    }

    void add_series(Series s) { series_.push_back(std::move(s)); }

    std::string render() const
    {
        double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
        for (const Series& s : series_)
            for (auto [x, y] : s.points) {
                x_min = std::min(x_min, x);
                x_max = std::max(x_max, x);
                y_min = std::min(y_min, std::max(y, 0.5));
                y_max = std::max(y_max, std::max(y, 0.5));
            }
        if (series_.empty() || x_min > x_max) {
            x_min = y_min = 1;
            x_max = y_max = 10;
        }
        if (x_min == x_max) x_max = x_min * 2;
        if (y_min == y_max) y_max = y_min * 2;

        auto lx = [&](double x) {
            return kLeft + (std::log2(x) - std::log2(x_min)) /
                               (std::log2(x_max) - std::log2(x_min)) * (kWidth - kLeft - kPad);
        };
        auto ly = [&](double y) {
            y = std::max(y, 0.5);
            return kHeight - kBottom -
                   (std::log2(y) - std::log2(y_min)) / (std::log2(y_max) - std::log2(y_min)) *
                       (kHeight - kBottom - kTop);
        };

        std::ostringstream svg;
        svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='"
            << kHeight << "'>\n";
        svg << "<rect width='100%' height='100%' fill='white'/>\n";
        svg << "<text x='" << kWidth / 2 << "' y='16' text-anchor='middle' font-size='14'>"
            << title_ << "</text>\n";
        svg << "<line x1='" << kLeft << "' y1='" << kHeight - kBottom << "' x2='" << kWidth - kPad
            << "' y2='" << kHeight - kBottom << "' stroke='black'/>\n";
        svg << "<line x1='" << kLeft << "' y1='" << kTop << "' x2='" << kLeft << "' y2='"
            << kHeight - kBottom << "' stroke='black'/>\n";
        svg << "<text x='" << kWidth / 2 << "' y='" << kHeight - 6
            << "' text-anchor='middle' font-size='11'>" << x_label_ << "</text>\n";
        svg << "<text x='12' y='" << kHeight / 2 << "' font-size='11' transform='rotate(-90 12 "
            << kHeight / 2 << ")' text-anchor='middle'>" << y_label_ << "</text>\n";

        // power-of-two x ticks, decade y ticks
        for (double x = std::pow(2, std::ceil(std::log2(x_min))); x <= x_max * 1.001; x *= 2) {
            svg << "<line x1='" << lx(x) << "' y1='" << kHeight - kBottom << "' x2='" << lx(x)
                << "' y2='" << kHeight - kBottom + 4 << "' stroke='black'/>\n";
            svg << "<text x='" << lx(x) << "' y='" << kHeight - kBottom + 16
                << "' text-anchor='middle' font-size='10'>" << static_cast<long long>(x)
                << "</text>\n";
        }
        for (double y = std::pow(10, std::ceil(std::log10(y_min))); y <= y_max * 1.001; y *= 10) {
            svg << "<line x1='" << kLeft - 4 << "' y1='" << ly(y) << "' x2='" << kLeft << "' y2='"
                << ly(y) << "' stroke='black'/>\n";
            svg << "<text x='" << kLeft - 6 << "' y='" << ly(y) + 3
                << "' text-anchor='end' font-size='10'>" << static_cast<long long>(y)
                << "</text>\n";
        }

        int legend_row = 0;
        for (const Series& s : series_) {
            if (s.points.empty()) continue;
            svg << "<polyline fill='none' stroke='" << s.color << "' stroke-width='1.5' points='";
            for (auto [x, y] : s.points) svg << lx(x) << ',' << ly(y) << ' ';
            svg << "'/>\n";
            for (auto [x, y] : s.points)
                svg << "<circle cx='" << lx(x) << "' cy='" << ly(y) << "' r='2.5' fill='"
                    << s.color << "'/>\n";
            double yl = kTop + 14 * legend_row++;
            svg << "<line x1='" << kWidth - 170 << "' y1='" << yl << "' x2='" << kWidth - 150
                << "' y2='" << yl << "' stroke='" << s.color << "' stroke-width='2'/>\n";
            svg << "<text x='" << kWidth - 145 << "' y='" << yl + 4 << "' font-size='10'>"
                << s.label << "</text>\n";
        }
        svg << "</svg>\n";
        return svg.str();
    }

    void save(const std::string& path) const
    {
        std::ofstream out(path);
        if (!out) throw IoError("cannot write " + path);
        out << render();
    }

private:
    static constexpr int kWidth = 560;
    static constexpr int kHeight = 360;
    static constexpr int kLeft = 60;
    static constexpr int kBottom = 44;
    static constexpr int kTop = 30;
    static constexpr int kPad = 16;

    std::string title_, x_label_, y_label_;
    std::vector<Series> series_;
};

}  // namespace mrsim
