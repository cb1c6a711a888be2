#pragma once

// Minimal SVG line charts for quick looks at result tables.

#include <filesystem>
#include <string>
#include <vector>

namespace gbssl::cli {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    bool markers_only = false;
};

struct LinePlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
};

std::string render_svg(const LinePlot& plot);
void write_svg(const LinePlot& plot, const std::filesystem::path& path);

}  // namespace gbssl::cli
