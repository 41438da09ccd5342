#include "oversmooth/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace oversmooth {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 55.0;

std::string coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

} // namespace

std::string scatter_svg(const std::vector<ScatterSeries>& series, const std::string& title,
                        const std::string& x_label, const std::string& y_label,
                        bool identity_line) {
    double lo = 0.0, hi = 1.0;
    bool any = false;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            if (!any) {
                lo = std::min(x, y);
                hi = std::max(x, y);
                any = true;
            } else {
                lo = std::min(lo, std::min(x, y));
                hi = std::max(hi, std::max(x, y));
            }
        }
    }
    if (!any) {
        lo = 0.0;
        hi = 1.0;
    }
    if (hi - lo < 1e-12) {
        const double pad = std::max(1e-12, std::abs(hi) * 0.5 + 0.5);
        lo -= pad;
        hi += pad;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    auto sx = [&](double v) { return kMarginLeft + (v - lo) / (hi - lo) * plot_w; };
    auto sy = [&](double v) { return kMarginTop + plot_h - (v - lo) / (hi - lo) * plot_h; };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    out << "  <rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    out << "  <text x=\"" << coord(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">"
        << escape_xml(title) << "</text>\n";

    // Frame and ticks.
    out << "  <rect x=\"" << coord(kMarginLeft) << "\" y=\"" << coord(kMarginTop) << "\" width=\""
        << coord(plot_w) << "\" height=\"" << coord(plot_h)
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    const int n_ticks = 5;
    for (int t = 0; t <= n_ticks; ++t) {
        const double v = lo + (hi - lo) * t / n_ticks;
        out << "  <line x1=\"" << coord(sx(v)) << "\" y1=\"" << coord(kMarginTop + plot_h)
            << "\" x2=\"" << coord(sx(v)) << "\" y2=\"" << coord(kMarginTop + plot_h + 5)
            << "\" stroke=\"black\"/>\n";
        out << "  <text x=\"" << coord(sx(v)) << "\" y=\"" << coord(kMarginTop + plot_h + 20)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << tick_label(v) << "</text>\n";
        out << "  <line x1=\"" << coord(kMarginLeft - 5) << "\" y1=\"" << coord(sy(v))
            << "\" x2=\"" << coord(kMarginLeft) << "\" y2=\"" << coord(sy(v))
            << "\" stroke=\"black\"/>\n";
        out << "  <text x=\"" << coord(kMarginLeft - 8) << "\" y=\"" << coord(sy(v) + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << tick_label(v) << "</text>\n";
    }
    out << "  <text x=\"" << coord(kMarginLeft + plot_w / 2) << "\" y=\""
        << coord(kHeight - 12)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << escape_xml(x_label) << "</text>\n";
    out << "  <text x=\"16\" y=\"" << coord(kMarginTop + plot_h / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 16 "
        << coord(kMarginTop + plot_h / 2) << ")\">" << escape_xml(y_label) << "</text>\n";

    if (identity_line) {
        out << "  <line x1=\"" << coord(sx(lo)) << "\" y1=\"" << coord(sy(lo)) << "\" x2=\""
            << coord(sx(hi)) << "\" y2=\"" << coord(sy(hi))
            << "\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n";
    }

    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            out << "  <circle cx=\"" << coord(sx(x)) << "\" cy=\"" << coord(sy(y))
                << "\" r=\"3.5\" fill=\"" << s.color << "\" fill-opacity=\"0.7\"/>\n";
        }
    }

    double legend_y = kMarginTop + 14.0;
    for (const auto& s : series) {
        out << "  <circle cx=\"" << coord(kMarginLeft + 14) << "\" cy=\"" << coord(legend_y)
            << "\" r=\"4\" fill=\"" << s.color << "\"/>\n";
        out << "  <text x=\"" << coord(kMarginLeft + 24) << "\" y=\"" << coord(legend_y + 4)
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape_xml(s.label)
            << "</text>\n";
        legend_y += 18.0;
    }

    out << "</svg>\n";
    return out.str();
}

} // namespace oversmooth
