#include "ehcoop/chart.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace ehcoop {

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
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

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct Axis {
    bool log = false;
    double lo = 0.0, hi = 1.0;  // transformed (log10 when log) range

    double place(double value, double pix_lo, double pix_hi) const {
        const double t = log ? std::log10(value) : value;
        return pix_lo + (t - lo) / (hi - lo) * (pix_hi - pix_lo);
    }
    bool plottable(double value) const {
        return std::isfinite(value) && (!log || value > 0.0);
    }
};

// Tick positions in data space. Log axes tick whole decades; linear
// axes use a 1/2/5 step covering the range in <= ~8 steps.
std::vector<double> make_ticks(const Axis& ax) {
    std::vector<double> ticks;
    if (ax.log) {
        int k_lo = static_cast<int>(std::ceil(ax.lo - 1e-9));
        int k_hi = static_cast<int>(std::floor(ax.hi + 1e-9));
        int step = 1 + (k_hi - k_lo) / 10;
        for (int k = k_lo; k <= k_hi; k += step) ticks.push_back(std::pow(10.0, k));
        return ticks;
    }
    const double span = ax.hi - ax.lo;
    double step = std::pow(10.0, std::floor(std::log10(span / 6.0)));
    if (span / step > 12.0) step *= 2.0;
    if (span / step > 12.0) step *= 2.5;
    if (span / step > 12.0) step *= 2.0;
    const double first = std::ceil(ax.lo / step - 1e-9) * step;
    for (double t = first; t <= ax.hi + 1e-9 * span; t += step) {
        ticks.push_back(std::fabs(t) < 1e-12 * span ? 0.0 : t);
    }
    return ticks;
}

}  // namespace

std::string render_line_chart(const ChartSpec& spec,
                              const std::vector<ChartSeries>& series) {
    Axis xa{spec.log_x}, ya{spec.log_y};

    bool any = false;
    double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            if (!xa.plottable(x) || !ya.plottable(y)) continue;
            const double tx = spec.log_x ? std::log10(x) : x;
            const double ty = spec.log_y ? std::log10(y) : y;
            if (!any) {
                x_lo = x_hi = tx;
                y_lo = y_hi = ty;
                any = true;
            } else {
                x_lo = std::min(x_lo, tx);
                x_hi = std::max(x_hi, tx);
                y_lo = std::min(y_lo, ty);
                y_hi = std::max(y_hi, ty);
            }
        }
    }
    if (!any) {
        x_lo = y_lo = 0.0;
        x_hi = y_hi = 1.0;
    }
    if (x_hi - x_lo < 1e-12) { x_lo -= 0.5; x_hi += 0.5; }
    if (y_hi - y_lo < 1e-12) { y_lo -= 0.5; y_hi += 0.5; }
    const double x_pad = 0.03 * (x_hi - x_lo);
    const double y_pad = 0.05 * (y_hi - y_lo);
    xa.lo = x_lo - x_pad;
    xa.hi = x_hi + x_pad;
    ya.lo = y_lo - y_pad;
    ya.hi = y_hi + y_pad;

    const double left = 76, right = spec.width - 20;
    const double top = 42, bottom = spec.height - 52;
    auto px = [&](double v) { return xa.place(v, left, right); };
    auto py = [&](double v) { return ya.place(v, bottom, top); };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width
        << "\" height=\"" << spec.height << "\" viewBox=\"0 0 " << spec.width
        << " " << spec.height << "\">\n"
        << "<rect width=\"" << spec.width << "\" height=\"" << spec.height
        << "\" fill=\"white\"/>\n";

    svg << "<text x=\"" << spec.width / 2 << "\" y=\"20\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">"
        << xml_escape(spec.title) << "</text>\n";
    if (!spec.note.empty()) {
        svg << "<text x=\"" << spec.width / 2 << "\" y=\"35\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"11\" fill=\"#555555\">"
            << xml_escape(spec.note) << "</text>\n";
    }

    // Grid and tick labels.
    for (double t : make_ticks(xa)) {
        const double x = px(t);
        svg << "<line x1=\"" << num(x) << "\" y1=\"" << num(top) << "\" x2=\""
            << num(x) << "\" y2=\"" << num(bottom)
            << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        svg << "<text x=\"" << num(x) << "\" y=\"" << num(bottom + 16)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
            << "font-size=\"11\">" << num(t) << "</text>\n";
    }
    for (double t : make_ticks(ya)) {
        const double y = py(t);
        svg << "<line x1=\"" << num(left) << "\" y1=\"" << num(y) << "\" x2=\""
            << num(right) << "\" y2=\"" << num(y)
            << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        svg << "<text x=\"" << num(left - 6) << "\" y=\"" << num(y + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
            << "font-size=\"11\">" << num(t) << "</text>\n";
    }

    // Frame and axis labels.
    svg << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\""
        << num(right - left) << "\" height=\"" << num(bottom - top)
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << (left + right) / 2 << "\" y=\"" << spec.height - 14
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << xml_escape(spec.x_label) << "</text>\n";
    svg << "<text x=\"18\" y=\"" << (top + bottom) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 18 " << (top + bottom) / 2 << ")\">"
        << xml_escape(spec.y_label) << "</text>\n";

    // Series.
    for (const auto& s : series) {
        if (!s.markers_only) {
            std::ostringstream run;
            int run_len = 0;
            auto flush = [&]() {
                if (run_len >= 2) {
                    svg << "<polyline fill=\"none\" stroke=\"" << s.color
                        << "\" stroke-width=\"1.8\""
                        << (s.dashed ? " stroke-dasharray=\"6 4\"" : "")
                        << " points=\"" << run.str() << "\"/>\n";
                }
                run.str("");
                run_len = 0;
            };
            for (const auto& [x, y] : s.points) {
                if (!xa.plottable(x) || !ya.plottable(y)) {
                    flush();
                    continue;
                }
                run << num(px(x)) << "," << num(py(y)) << " ";
                ++run_len;
            }
            flush();
        }
        if (s.markers_only) {
            for (const auto& [x, y] : s.points) {
                if (!xa.plottable(x) || !ya.plottable(y)) continue;
                svg << "<circle cx=\"" << num(px(x)) << "\" cy=\"" << num(py(y))
                    << "\" r=\"3\" fill=\"none\" stroke=\"" << s.color
                    << "\" stroke-width=\"1.5\"/>\n";
            }
        }
    }

    // Legend, top-right corner of the plot area.
    double ly = top + 14;
    for (const auto& s : series) {
        if (s.label.empty()) continue;
        const double lx = right - 150;
        if (s.markers_only) {
            svg << "<circle cx=\"" << num(lx + 13) << "\" cy=\"" << num(ly - 4)
                << "\" r=\"3\" fill=\"none\" stroke=\"" << s.color
                << "\" stroke-width=\"1.5\"/>\n";
        } else {
            svg << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly - 4)
                << "\" x2=\"" << num(lx + 26) << "\" y2=\"" << num(ly - 4)
                << "\" stroke=\"" << s.color << "\" stroke-width=\"1.8\""
                << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
        }
        svg << "<text x=\"" << num(lx + 32) << "\" y=\"" << num(ly)
            << "\" font-family=\"sans-serif\" font-size=\"11\">"
            << xml_escape(s.label) << "</text>\n";
        ly += 15;
    }

    svg << "</svg>\n";
    return svg.str();
}

}  // namespace ehcoop
