#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace shearflow {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotOptions {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    bool logx = false;
    bool logy = false;  // nonpositive points are dropped on log axes
    int width = 720;
    int height = 480;
};

std::string render_svg(const std::vector<PlotSeries>& series, const PlotOptions& opt);
void write_svg(const std::filesystem::path& path, const std::vector<PlotSeries>& series,
               const PlotOptions& opt);

}  // namespace shearflow
