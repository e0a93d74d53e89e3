#include "mmc/analysis.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "mmc/io.hpp"
#include "mmc/svg.hpp"

namespace mmc::analysis {

namespace {

// Forward pass that captures the post-activation output of one layer.
std::vector<double> layer_output(const MlpModel& model, int layer_index, Vec2 input) {
    std::vector<double> cur = {input.x, input.y};
    for (int k = 0; k <= layer_index; ++k) {
        const Layer& l = model.layers[static_cast<std::size_t>(k)];
        std::vector<double> next(static_cast<std::size_t>(l.out));
        for (int o = 0; o < l.out; ++o) {
            double acc = l.bias[static_cast<std::size_t>(o)];
            for (int i = 0; i < l.in; ++i)
                acc += l.weights[static_cast<std::size_t>(o) * l.in + i] * cur[static_cast<std::size_t>(i)];
            next[static_cast<std::size_t>(o)] = l.activation == Activation::Tanh ? std::tanh(acc) : acc;
        }
        cur = std::move(next);
    }
    return cur;
}

}  // namespace

ActivationProfile hidden_profile(const MlpModel& model, int layer_index, int n_samples,
                                 double input_length) {
    if (layer_index < 0 || layer_index + 1 >= static_cast<int>(model.layers.size()))
        throw std::out_of_range("hidden_profile: no hidden layer with that index");
    if (n_samples < 8) throw std::invalid_argument("hidden_profile: n_samples must be >= 8");

    ActivationProfile p;
    p.layer_index = layer_index;
    p.angles.reserve(static_cast<std::size_t>(n_samples));
    p.activations.reserve(static_cast<std::size_t>(n_samples));
    for (int k = 0; k < n_samples; ++k) {
        const double theta = 2.0 * std::numbers::pi * k / n_samples;
        p.angles.push_back(theta);
        p.activations.push_back(layer_output(model, layer_index, from_angle(theta, input_length)));
    }
    return p;
}

std::vector<double> peak_angles(const ActivationProfile& profile) {
    if (profile.activations.empty())
        throw std::invalid_argument("peak_angles: empty profile");
    const std::size_t n_units = profile.activations[0].size();
    std::vector<double> peaks(n_units);
    for (std::size_t u = 0; u < n_units; ++u) {
        double best = std::abs(profile.activations[0][u]);
        std::size_t best_k = 0;
        for (std::size_t k = 1; k < profile.activations.size(); ++k) {
            const double a = std::abs(profile.activations[k][u]);
            if (a > best) {
                best = a;
                best_k = k;
            }
        }
        peaks[u] = profile.angles[best_k];
    }
    return peaks;
}

DisplacementField displacement_field(const MlpModel& model, double grid_extent,
                                     int grid_steps) {
    if (grid_steps < 2) throw std::invalid_argument("displacement_field: grid_steps must be >= 2");
    DisplacementField f;
    for (int iy = 0; iy < grid_steps; ++iy) {
        for (int ix = 0; ix < grid_steps; ++ix) {
            const Vec2 p{-grid_extent + 2.0 * grid_extent * ix / (grid_steps - 1),
                         -grid_extent + 2.0 * grid_extent * iy / (grid_steps - 1)};
            if (length(p) < 0.05) continue;
            f.grid_points.push_back(p);
            f.displacements.push_back(forward(model, p) - p);
        }
    }
    return f;
}

void write_profile_csv(const ActivationProfile& profile, const std::filesystem::path& path) {
    std::ostringstream s;
    const std::size_t n_units = profile.activations.empty() ? 0 : profile.activations[0].size();
    s << "angle_deg";
    for (std::size_t u = 0; u < n_units; ++u) s << ",unit_" << u;
    s << "\n";
    for (std::size_t k = 0; k < profile.angles.size(); ++k) {
        s << io::fmt(profile.angles[k] * 180.0 / std::numbers::pi);
        for (std::size_t u = 0; u < n_units; ++u) s << "," << io::fmt(profile.activations[k][u]);
        s << "\n";
    }
    io::write_text_file(path, s.str());
}

void write_field_csv(const DisplacementField& field, const std::filesystem::path& path) {
    std::ostringstream s;
    s << "x,y,dx,dy\n";
    for (std::size_t k = 0; k < field.grid_points.size(); ++k) {
        s << io::fmt(field.grid_points[k].x) << "," << io::fmt(field.grid_points[k].y) << ","
          << io::fmt(field.displacements[k].x) << "," << io::fmt(field.displacements[k].y)
          << "\n";
    }
    io::write_text_file(path, s.str());
}

void write_profile_svg(const ActivationProfile& profile, const std::filesystem::path& path) {
    static const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                    "#bcbd22", "#17becf"};
    std::vector<svg::Series> series;
    const std::size_t n_units = profile.activations.empty() ? 0 : profile.activations[0].size();
    for (std::size_t u = 0; u < n_units; ++u) {
        svg::Series sr;
        sr.label = "unit " + std::to_string(u);
        sr.color = kColors[u % 10];
        for (std::size_t k = 0; k < profile.angles.size(); ++k) {
            sr.x.push_back(profile.angles[k] * 180.0 / std::numbers::pi);
            sr.y.push_back(profile.activations[k][u]);
        }
        series.push_back(std::move(sr));
    }
    svg::write_line_plot(path, "Hidden unit activations over input angle",
                         "input angle [deg]", "activation", series);
}

void write_field_svg(const DisplacementField& field, double extent,
                     const std::filesystem::path& path) {
    std::vector<svg::Arrow> arrows;
    arrows.reserve(field.grid_points.size());
    for (std::size_t k = 0; k < field.grid_points.size(); ++k)
        arrows.push_back({field.grid_points[k], field.displacements[k]});
    svg::write_quiver_plot(path, "Normalization displacement field", arrows, extent + 0.5);
}

}  // namespace mmc::analysis
