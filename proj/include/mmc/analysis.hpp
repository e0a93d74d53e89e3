#pragma once

#include <filesystem>
#include <vector>

#include "mmc/mlp.hpp"

namespace mmc::analysis {

// Hidden-layer activations over an angle sweep, one row per sampled angle.
struct ActivationProfile {
    std::vector<double> angles;                     // radians, evenly spaced in [0, 2*pi)
    std::vector<std::vector<double>> activations;   // n_samples x n_hidden
    int layer_index = 0;
};

struct DisplacementField {
    std::vector<Vec2> grid_points;
    std::vector<Vec2> displacements;  // output - input
};

ActivationProfile hidden_profile(const MlpModel& model, int layer_index, int n_samples = 360,
                                 double input_length = 1.0);

// Per hidden unit, the sweep angle of maximum absolute activation
// (ties broken toward the lowest angle).
std::vector<double> peak_angles(const ActivationProfile& profile);

// Grid points with length < 0.05 are excluded.
DisplacementField displacement_field(const MlpModel& model, double grid_extent,
                                     int grid_steps);

void write_profile_csv(const ActivationProfile& profile, const std::filesystem::path& path);
void write_field_csv(const DisplacementField& field, const std::filesystem::path& path);
void write_profile_svg(const ActivationProfile& profile, const std::filesystem::path& path);
void write_field_svg(const DisplacementField& field, double extent,
                     const std::filesystem::path& path);

}  // namespace mmc::analysis
