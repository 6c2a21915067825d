#pragma once

#include <string>
#include <vector>

namespace curvemom {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct CsvTable {
    std::string x_label;
    std::vector<PlotSeries> series;
};

// First column is x; every further column becomes one series labeled by its header.
CsvTable read_csv_table(const std::string& path);

// Fixed 640x480 canvas, 9-significant-digit data mapped at 6 digits; identical input
// gives identical bytes. Non-finite samples are skipped.
std::string line_plot_svg(const std::vector<PlotSeries>& series, const std::string& x_label,
                          const std::string& y_label);

// Elevation cut on a half-disc: x is theta in degrees from zenith, y in dB with a
// 40 dB visible dynamic range.
std::string polar_plot_svg(const std::vector<PlotSeries>& series, const std::string& label);

void write_svg(const std::string& path, const std::string& text);

}  // namespace curvemom
