#include "stirap/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "stirap/errors.hpp"
#include "stirap/table.hpp"

namespace stirap {

namespace {

constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

struct Range {
    double lo = 0.0, hi = 1.0;

    void grow(double v) {
        if (!std::isfinite(v)) return;
        if (empty) {
            lo = hi = v;
            empty = false;
        } else {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    void finish() {
        if (empty) return;
        if (lo == hi) {
            lo -= 0.5;
            hi += 0.5;
        } else {
            const double pad = 0.04 * (hi - lo);
            lo -= pad;
            hi += pad;
        }
    }
    bool empty = true;
};

double nice_step(double span) {
    const double raw = span / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0}) {
        if (raw <= m * mag) return m * mag;
    }
    return 10.0 * mag;
}

std::string tick_label(double v) {
    // Snap values that are ticks of a rounded grid to a short form.
    const double snapped = std::abs(v) < 1e-12 ? 0.0 : v;
    return format_double(snapped);
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else out += c;
    }
    return out;
}

} // namespace

std::string render_svg_plot(const std::vector<PlotSeries>& series,
                            const PlotOptions& opt) {
    const double left = 72, right = 24, top = 44, bottom = 58;
    const double w = opt.width, h = opt.height;
    const double plot_w = w - left - right, plot_h = h - top - bottom;

    Range xr, yr;
    for (const auto& s : series) {
        const std::size_t n = std::min(s.x.size(), s.y.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) {
                xr.grow(s.x[i]);
                yr.grow(s.y[i]);
            }
        }
    }
    xr.finish();
    yr.finish();

    const auto px = [&](double x) {
        return left + (x - xr.lo) / (xr.hi - xr.lo) * plot_w;
    };
    const auto py = [&](double y) {
        return top + (yr.hi - y) / (yr.hi - yr.lo) * plot_h;
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
        << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h
        << "\">\n"
        << "<rect width=\"" << w << "\" height=\"" << h
        << "\" fill=\"white\"/>\n"
        << "<g font-family=\"sans-serif\" font-size=\"13\">\n";

    // Grid and ticks.
    svg << "<g stroke=\"#d8d8d8\" stroke-width=\"1\">\n";
    const double xs = nice_step(xr.hi - xr.lo), ys = nice_step(yr.hi - yr.lo);
    std::ostringstream labels;
    labels.setf(std::ios::fixed);
    for (double x = std::ceil(xr.lo / xs) * xs; x <= xr.hi + 1e-9 * xs; x += xs) {
        svg << "<line x1=\"" << px(x) << "\" y1=\"" << top << "\" x2=\""
            << px(x) << "\" y2=\"" << top + plot_h << "\"/>\n";
        labels << "<text x=\"" << px(x) << "\" y=\"" << top + plot_h + 20
               << "\" text-anchor=\"middle\">" << tick_label(x) << "</text>\n";
    }
    for (double y = std::ceil(yr.lo / ys) * ys; y <= yr.hi + 1e-9 * ys; y += ys) {
        svg << "<line x1=\"" << left << "\" y1=\"" << py(y) << "\" x2=\""
            << left + plot_w << "\" y2=\"" << py(y) << "\"/>\n";
        labels << "<text x=\"" << left - 8 << "\" y=\"" << py(y) + 4
               << "\" text-anchor=\"end\">" << tick_label(y) << "</text>\n";
    }
    svg << "</g>\n" << labels.str();

    // Frame.
    svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w
        << "\" height=\"" << plot_h
        << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1.2\"/>\n";

    // Series.
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = palette[k % (sizeof palette / sizeof *palette)];
        const std::size_t n = std::min(s.x.size(), s.y.size());
        std::ostringstream path;
        bool pen_down = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                pen_down = false;
                continue;
            }
            path << (pen_down ? " L " : " M ") << px(s.x[i]) << ' '
                 << py(s.y[i]);
            pen_down = true;
        }
        svg << "<path d=\"" << path.str()
            << "\" fill=\"none\" stroke-width=\"1.8\" stroke=\"" << color
            << "\"/>\n";
    }

    // Legend.
    if (series.size() > 1 ||
        (series.size() == 1 && !series[0].label.empty())) {
        double ly = top + 14;
        for (std::size_t k = 0; k < series.size(); ++k) {
            const char* color = palette[k % (sizeof palette / sizeof *palette)];
            const double lx = left + plot_w - 150;
            svg << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\""
                << lx + 26 << "\" y2=\"" << ly - 4
                << "\" stroke-width=\"2.5\" stroke=\"" << color << "\"/>\n"
                << "<text x=\"" << lx + 32 << "\" y=\"" << ly << "\">"
                << escape(series[k].label) << "</text>\n";
            ly += 18;
        }
    }

    // Titles.
    svg << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" "
           "font-size=\"16\">"
        << escape(opt.title) << "</text>\n"
        << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << h - 14
        << "\" text-anchor=\"middle\">" << escape(opt.x_label) << "</text>\n"
        << "<text x=\"18\" y=\"" << top + plot_h / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << top + plot_h / 2 << ")\">" << escape(opt.y_label) << "</text>\n"
        << "</g>\n</svg>\n";
    return svg.str();
}

void write_svg_plot(const std::string& path,
                    const std::vector<PlotSeries>& series,
                    const PlotOptions& opt) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open output file: " + path);
    os << render_svg_plot(series, opt);
    if (!os.flush()) throw ConfigError("failed writing output file: " + path);
}

} // namespace stirap
