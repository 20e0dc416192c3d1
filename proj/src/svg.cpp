#include "uqline/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace uqline {

namespace {

constexpr double width = 640.0;
constexpr double height = 420.0;
constexpr double margin_left = 70.0;
constexpr double margin_right = 20.0;
constexpr double margin_top = 44.0;
constexpr double margin_bottom = 52.0;

std::string fmt(const char* pattern, double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), pattern, v);
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
            default: out += c;
        }
    }
    return out;
}

}  // namespace

void write_trend_svg(std::ostream& out, const binned_trend_result& bt, const std::string& title,
                     const std::string& y_label) {
    const double plot_w = width - margin_left - margin_right;
    const double plot_h = height - margin_top - margin_bottom;

    // y domain over the visible marks: non-empty bin means and the fit curve
    double y_min = bt.fit.predict(0.0);
    double y_max = y_min;
    for (int i = 0; i <= 64; ++i) {
        const double v = bt.fit.predict(i / 64.0);
        y_min = std::min(y_min, v);
        y_max = std::max(y_max, v);
    }
    for (std::size_t b = 0; b < bt.bin_means.size(); ++b) {
        if (bt.bin_counts[b] == 0) continue;
        y_min = std::min(y_min, bt.bin_means[b]);
        y_max = std::max(y_max, bt.bin_means[b]);
    }
    if (y_max == y_min) {
        y_min -= 0.5;
        y_max += 0.5;
    }
    const double pad = 0.08 * (y_max - y_min);
    y_min -= pad;
    y_max += pad;

    const auto px = [&](double z) { return margin_left + z * plot_w; };
    const auto py = [&](double v) { return margin_top + (y_max - v) / (y_max - y_min) * plot_h; };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << static_cast<int>(width)
        << "\" height=\"" << static_cast<int>(height) << "\" viewBox=\"0 0 "
        << static_cast<int>(width) << " " << static_cast<int>(height) << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    out << "<text x=\"" << fmt("%.1f", width / 2) << "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"15\" fill=\"#1c1c1c\">"
        << escape_xml(title) << "</text>\n";

    // gridlines and y tick labels
    for (int g = 0; g <= 4; ++g) {
        const double v = y_min + (y_max - y_min) * g / 4.0;
        const double y = py(v);
        out << "<line x1=\"" << fmt("%.2f", margin_left) << "\" y1=\"" << fmt("%.2f", y)
            << "\" x2=\"" << fmt("%.2f", width - margin_right) << "\" y2=\"" << fmt("%.2f", y)
            << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << fmt("%.2f", margin_left - 8) << "\" y=\"" << fmt("%.2f", y + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#444444\">"
            << fmt("%.3g", v) << "</text>\n";
    }

    // x ticks in raw length units at the normalized quarters
    for (int g = 0; g <= 4; ++g) {
        const double z = g / 4.0;
        const double raw = bt.length_min + z * (bt.length_max - bt.length_min);
        out << "<text x=\"" << fmt("%.2f", px(z)) << "\" y=\"" << fmt("%.2f", height - margin_bottom + 18)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#444444\">"
            << fmt("%.0f", raw) << "</text>\n";
    }
    out << "<text x=\"" << fmt("%.1f", margin_left + plot_w / 2) << "\" y=\""
        << fmt("%.1f", height - 14)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#1c1c1c\">"
           "output length (tokens)</text>\n";
    out << "<text x=\"18\" y=\"" << fmt("%.1f", margin_top + plot_h / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#1c1c1c\" "
           "transform=\"rotate(-90 18 "
        << fmt("%.1f", margin_top + plot_h / 2) << ")\">" << escape_xml(y_label) << "</text>\n";

    // axes
    out << "<line x1=\"" << fmt("%.2f", margin_left) << "\" y1=\"" << fmt("%.2f", margin_top)
        << "\" x2=\"" << fmt("%.2f", margin_left) << "\" y2=\"" << fmt("%.2f", height - margin_bottom)
        << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    out << "<line x1=\"" << fmt("%.2f", margin_left) << "\" y1=\"" << fmt("%.2f", height - margin_bottom)
        << "\" x2=\"" << fmt("%.2f", width - margin_right) << "\" y2=\""
        << fmt("%.2f", height - margin_bottom) << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

    // fitted curve sampled densely enough for any supported degree
    out << "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"2\" points=\"";
    for (int i = 0; i <= 64; ++i) {
        const double z = i / 64.0;
        if (i > 0) out << ' ';
        out << fmt("%.2f", px(z)) << ',' << fmt("%.2f", py(bt.fit.predict(z)));
    }
    out << "\"/>\n";

    // bin means
    for (std::size_t b = 0; b < bt.bin_means.size(); ++b) {
        if (bt.bin_counts[b] == 0) continue;
        out << "<circle cx=\"" << fmt("%.2f", px(bt.bin_centers[b])) << "\" cy=\""
            << fmt("%.2f", py(bt.bin_means[b])) << "\" r=\"3.5\" fill=\"#2c6fbb\"/>\n";
    }

    out << "<text x=\"" << fmt("%.2f", width - margin_right - 6) << "\" y=\""
        << fmt("%.2f", margin_top + 16)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#1c1c1c\">"
        << "slope " << fmt("%.4g", bt.fit.slope()) << ", p " << fmt("%.3g", bt.fit.p_value)
        << ", r² " << fmt("%.3g", bt.fit.r_squared) << ", n " << bt.fit.n << "</text>\n";
    out << "</svg>\n";
}

}  // namespace uqline
