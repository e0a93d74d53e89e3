#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mmc/geom.hpp"

namespace mmc::svg {

struct Series {
    std::string label;
    std::string color;                // e.g. "#1f77b4"
    std::vector<double> x, y;
    std::vector<double> band;         // optional +/- band around y (std dev)
};

struct Arrow {
    Vec2 base;
    Vec2 delta;
};

struct ArmPose {
    std::vector<Vec2> joints;  // base .. tip
    bool emphasized = false;
};

// All plots use a fixed 800x500 viewport.
void write_line_plot(const std::filesystem::path& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<Series>& series);

void write_quiver_plot(const std::filesystem::path& path, const std::string& title,
                       const std::vector<Arrow>& arrows, double extent);

void write_arm_plot(const std::filesystem::path& path, const std::string& title,
                    const std::vector<ArmPose>& poses, Vec2 target);

}  // namespace mmc::svg
