#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace pmsim {

// Static SVG charts; no display server or external renderer involved.

struct SvgSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct SvgBand {
    std::vector<double> x;
    std::vector<double> lo;
    std::vector<double> hi;
    int series_index = 0;  // band uses the matching series color
};

class LineChart {
public:
    LineChart(std::string title, std::string x_label, std::string y_label)
        : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

    void add_series(std::string name, std::vector<double> x, std::vector<double> y);
    void add_band(std::vector<double> x, std::vector<double> lo, std::vector<double> hi,
                  int series_index);
    void write(const std::filesystem::path& path) const;

private:
    std::string title_, x_label_, y_label_;
    std::vector<SvgSeries> series_;
    std::vector<SvgBand> bands_;
};

struct HeatMarker {
    double x = 0.0;
    double y = 0.0;
    std::string label;
};

class HeatMap {
public:
    HeatMap(std::string title, std::string x_label, std::string y_label,
            std::vector<double> x_axis, std::vector<double> y_axis,
            std::vector<double> values)  // row-major [y_index * x_size + x_index]
        : title_(std::move(title)),
          x_label_(std::move(x_label)),
          y_label_(std::move(y_label)),
          x_axis_(std::move(x_axis)),
          y_axis_(std::move(y_axis)),
          values_(std::move(values)) {}

    void add_marker(double x, double y, std::string label);
    void write(const std::filesystem::path& path) const;

private:
    std::string title_, x_label_, y_label_;
    std::vector<double> x_axis_, y_axis_, values_;
    std::vector<HeatMarker> markers_;
};

}  // namespace pmsim
