#include "pmsim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace pmsim {

namespace {

constexpr int kWidth = 760;
constexpr int kHeight = 480;
constexpr int kMarginLeft = 72;
constexpr int kMarginRight = 24;
constexpr int kMarginTop = 44;
constexpr int kMarginBottom = 58;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;

std::string escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.6g", v);
    return buffer;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void include(double v) {
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    void pad() {
        if (!(lo <= hi)) {
            lo = 0.0;
            hi = 1.0;
        }
        if (lo == hi) {
            lo -= 0.5;
            hi += 0.5;
        }
        const double margin = 0.05 * (hi - lo);
        lo -= margin;
        hi += margin;
    }
};

std::vector<double> nice_ticks(double lo, double hi, int target = 6) {
    const double span = hi - lo;
    const double raw_step = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw_step)));
    double step = mag;
    for (double mult : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        if (mag * mult >= raw_step) {
            step = mag * mult;
            break;
        }
    }
    std::vector<double> ticks;
    double tick = std::ceil(lo / step) * step;
    while (tick <= hi + 1e-12 * span) {
        ticks.push_back(std::abs(tick) < 1e-12 * span ? 0.0 : tick);
        tick += step;
    }
    return ticks;
}

}  // namespace

void LineChart::add_series(std::string name, std::vector<double> x, std::vector<double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("LineChart: x/y length mismatch");
    series_.push_back(SvgSeries{std::move(name), std::move(x), std::move(y)});
}

void LineChart::add_band(std::vector<double> x, std::vector<double> lo, std::vector<double> hi,
                         int series_index) {
    if (x.size() != lo.size() || x.size() != hi.size())
        throw std::invalid_argument("LineChart: band length mismatch");
    bands_.push_back(SvgBand{std::move(x), std::move(lo), std::move(hi), series_index});
}

void LineChart::write(const std::filesystem::path& path) const {
    Range xr, yr;
    for (const auto& s : series_) {
        for (double v : s.x) xr.include(v);
        for (double v : s.y) yr.include(v);
    }
    for (const auto& b : bands_) {
        for (double v : b.lo) yr.include(v);
        for (double v : b.hi) yr.include(v);
    }
    xr.pad();
    yr.pad();

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    const auto px = [&](double v) {
        return kMarginLeft + (v - xr.lo) / (xr.hi - xr.lo) * plot_w;
    };
    const auto py = [&](double v) {
        return kMarginTop + plot_h - (v - yr.lo) / (yr.hi - yr.lo) * plot_h;
    };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" font-family=\"sans-serif\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
        << escape(title_) << "</text>\n";

    for (double tick : nice_ticks(xr.lo, xr.hi)) {
        const double x = px(tick);
        out << "<line x1=\"" << num(x) << "\" y1=\"" << kMarginTop << "\" x2=\"" << num(x)
            << "\" y2=\"" << num(kMarginTop + plot_h) << "\" stroke=\"#e0e0e0\"/>\n";
        out << "<text x=\"" << num(x) << "\" y=\"" << num(kMarginTop + plot_h + 18)
            << "\" text-anchor=\"middle\" font-size=\"11\">" << num(tick) << "</text>\n";
    }
    for (double tick : nice_ticks(yr.lo, yr.hi)) {
        const double y = py(tick);
        out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << num(y) << "\" x2=\""
            << num(kMarginLeft + plot_w) << "\" y2=\"" << num(y) << "\" stroke=\"#e0e0e0\"/>\n";
        out << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << num(y + 4)
            << "\" text-anchor=\"end\" font-size=\"11\">" << num(tick) << "</text>\n";
    }
    out << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << num(plot_w)
        << "\" height=\"" << num(plot_h) << "\" fill=\"none\" stroke=\"#606060\"/>\n";
    out << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 14
        << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(x_label_) << "</text>\n";
    out << "<text x=\"18\" y=\"" << kMarginTop + plot_h / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
        << kMarginTop + plot_h / 2 << ")\">" << escape(y_label_) << "</text>\n";

    for (const auto& band : bands_) {
        const char* color = kPalette[band.series_index % kPaletteSize];
        out << "<polygon fill=\"" << color << "\" fill-opacity=\"0.15\" stroke=\"none\" points=\"";
        for (std::size_t i = 0; i < band.x.size(); ++i)
            out << num(px(band.x[i])) << ',' << num(py(band.hi[i])) << ' ';
        for (std::size_t i = band.x.size(); i-- > 0;)
            out << num(px(band.x[i])) << ',' << num(py(band.lo[i])) << ' ';
        out << "\"/>\n";
    }

    for (std::size_t s = 0; s < series_.size(); ++s) {
        const char* color = kPalette[s % kPaletteSize];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
        for (std::size_t i = 0; i < series_[s].x.size(); ++i)
            out << num(px(series_[s].x[i])) << ',' << num(py(series_[s].y[i])) << ' ';
        out << "\"/>\n";
    }

    const double legend_x = kMarginLeft + plot_w - 170;
    double legend_y = kMarginTop + 14;
    for (std::size_t s = 0; s < series_.size(); ++s) {
        const char* color = kPalette[s % kPaletteSize];
        out << "<line x1=\"" << num(legend_x) << "\" y1=\"" << num(legend_y - 4) << "\" x2=\""
            << num(legend_x + 26) << "\" y2=\"" << num(legend_y - 4) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << num(legend_x + 32) << "\" y=\"" << num(legend_y)
            << "\" font-size=\"11\">" << escape(series_[s].name) << "</text>\n";
        legend_y += 16;
    }
    out << "</svg>\n";
}

void HeatMap::add_marker(double x, double y, std::string label) {
    markers_.push_back(HeatMarker{x, y, std::move(label)});
}

void HeatMap::write(const std::filesystem::path& path) const {
    const std::size_t nx = x_axis_.size();
    const std::size_t ny = y_axis_.size();
    if (values_.size() != nx * ny)
        throw std::invalid_argument("HeatMap: values size does not match axes");

    double vmin = std::numeric_limits<double>::infinity();
    double vmax = -std::numeric_limits<double>::infinity();
    for (double v : values_) {
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    if (!(vmin < vmax)) {
        vmin -= 0.5;
        vmax += 0.5;
    }

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    const double cell_w = plot_w / static_cast<double>(nx);
    const double cell_h = plot_h / static_cast<double>(ny);

    // Two-stop blue -> red map through white.
    const auto color_of = [&](double v) {
        const double t = std::clamp((v - vmin) / (vmax - vmin), 0.0, 1.0);
        int r, g, b;
        if (t < 0.5) {
            const double u = t / 0.5;
            r = static_cast<int>(49 + (247 - 49) * u);
            g = static_cast<int>(110 + (247 - 110) * u);
            b = static_cast<int>(180 + (247 - 180) * u);
        } else {
            const double u = (t - 0.5) / 0.5;
            r = static_cast<int>(247 + (214 - 247) * u);
            g = static_cast<int>(247 + (39 - 247) * u);
            b = static_cast<int>(247 + (40 - 247) * u);
        }
        char buffer[10];
        std::snprintf(buffer, sizeof(buffer), "#%02x%02x%02x", r, g, b);
        return std::string(buffer);
    };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" font-family=\"sans-serif\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
        << escape(title_) << "</text>\n";

    for (std::size_t yi = 0; yi < ny; ++yi) {
        for (std::size_t xi = 0; xi < nx; ++xi) {
            const double x = kMarginLeft + static_cast<double>(xi) * cell_w;
            // y axis increases upward
            const double y = kMarginTop + plot_h - static_cast<double>(yi + 1) * cell_h;
            out << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\""
                << num(cell_w + 0.5) << "\" height=\"" << num(cell_h + 0.5) << "\" fill=\""
                << color_of(values_[yi * nx + xi]) << "\"/>\n";
        }
    }

    out << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << num(plot_w)
        << "\" height=\"" << num(plot_h) << "\" fill=\"none\" stroke=\"#606060\"/>\n";

    const auto px = [&](double v) {
        return kMarginLeft + (v - x_axis_.front()) / (x_axis_.back() - x_axis_.front()) * plot_w;
    };
    const auto py = [&](double v) {
        return kMarginTop + plot_h -
               (v - y_axis_.front()) / (y_axis_.back() - y_axis_.front()) * plot_h;
    };
    for (double tick : nice_ticks(x_axis_.front(), x_axis_.back(), 5)) {
        out << "<text x=\"" << num(px(tick)) << "\" y=\"" << num(kMarginTop + plot_h + 18)
            << "\" text-anchor=\"middle\" font-size=\"11\">" << num(tick) << "</text>\n";
    }
    for (double tick : nice_ticks(y_axis_.front(), y_axis_.back(), 5)) {
        out << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << num(py(tick) + 4)
            << "\" text-anchor=\"end\" font-size=\"11\">" << num(tick) << "</text>\n";
    }
    out << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 14
        << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(x_label_) << "</text>\n";
    out << "<text x=\"18\" y=\"" << kMarginTop + plot_h / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
        << kMarginTop + plot_h / 2 << ")\">" << escape(y_label_) << "</text>\n";

    for (const auto& marker : markers_) {
        out << "<circle cx=\"" << num(px(marker.x)) << "\" cy=\"" << num(py(marker.y))
            << "\" r=\"5\" fill=\"#9467bd\" stroke=\"white\"/>\n";
        out << "<text x=\"" << num(px(marker.x) - 8) << "\" y=\"" << num(py(marker.y) - 8)
            << "\" text-anchor=\"end\" font-size=\"12\">" << escape(marker.label) << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace pmsim
