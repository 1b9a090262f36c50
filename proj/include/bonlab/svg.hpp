#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "bonlab/io.hpp"

namespace bonlab {

// Minimal deterministic line plot: fixed canvas, linear or log x, one
// polyline per series. The CSVs are the contract; these are a convenience.
struct SvgSeries {
    std::string label;
    std::string color;
    std::vector<double> x;
    std::vector<double> y;
};

inline std::string render_line_svg(const std::string& title, const std::string& x_label,
                                   const std::string& y_label, std::vector<SvgSeries> series,
                                   bool log_x = false) {
    const double width = 640, height = 400;
    const double ml = 60, mr = 15, mt = 30, mb = 45;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (auto& s : series) {
        std::vector<double> fx, fy;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            double xv = s.x[i];
            if (!std::isfinite(xv) || !std::isfinite(s.y[i])) continue;
            if (log_x) {
                if (!(xv > 0.0)) continue;
                xv = std::log10(xv);
            }
            fx.push_back(xv);
            fy.push_back(s.y[i]);
            xmin = std::min(xmin, xv);
            xmax = std::max(xmax, xv);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
        s.x = fx;
        s.y = fy;
    }
    if (xmax <= xmin) { xmax = xmin + 1; }
    if (ymax <= ymin) { ymax = ymin + 1; }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr); };
    auto py = [&](double y) { return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb); };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" "
           "viewBox=\"0 0 640 400\">\n";
    svg += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
    svg += "<text x=\"320\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" + title +
           "</text>\n";
    svg += "<line x1=\"" + format_double(ml) + "\" y1=\"" + format_double(height - mb) +
           "\" x2=\"" + format_double(width - mr) + "\" y2=\"" + format_double(height - mb) +
           "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + format_double(ml) + "\" y1=\"" + format_double(mt) + "\" x2=\"" +
           format_double(ml) + "\" y2=\"" + format_double(height - mb) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"320\" y=\"392\" text-anchor=\"middle\" font-size=\"12\">" + x_label +
           (log_x ? " (log10)" : "") + "</text>\n";
    svg += "<text x=\"14\" y=\"200\" text-anchor=\"middle\" font-size=\"12\" "
           "transform=\"rotate(-90 14 200)\">" + y_label + "</text>\n";
    double legend_y = mt + 8;
    for (const auto& s : series) {
        if (s.x.empty()) continue;
        std::string pts;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            pts += format_double(px(s.x[i])) + "," + format_double(py(s.y[i]));
            if (i + 1 < s.x.size()) pts += " ";
        }
        svg += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\" points=\"" +
               pts + "\"/>\n";
        svg += "<text x=\"" + format_double(width - mr - 5) + "\" y=\"" + format_double(legend_y) +
               "\" text-anchor=\"end\" font-size=\"11\" fill=\"" + s.color + "\">" + s.label +
               "</text>\n";
        legend_y += 14;
    }
    // Axis extent labels.
    svg += "<text x=\"" + format_double(ml) + "\" y=\"" + format_double(height - mb + 14) +
           "\" font-size=\"10\">" + format_double(xmin) + "</text>\n";
    svg += "<text x=\"" + format_double(width - mr) + "\" y=\"" + format_double(height - mb + 14) +
           "\" text-anchor=\"end\" font-size=\"10\">" + format_double(xmax) + "</text>\n";
    svg += "<text x=\"" + format_double(ml - 4) + "\" y=\"" + format_double(height - mb) +
           "\" text-anchor=\"end\" font-size=\"10\">" + format_double(ymin) + "</text>\n";
    svg += "<text x=\"" + format_double(ml - 4) + "\" y=\"" + format_double(mt + 4) +
           "\" text-anchor=\"end\" font-size=\"10\">" + format_double(ymax) + "</text>\n";
    svg += "</svg>\n";
    return svg;
}

} // namespace bonlab
