#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mmc/geom.hpp"

namespace mmc {

enum class Activation { Tanh, Linear };

struct Layer {
    int in = 0;
    int out = 0;
    std::vector<double> weights;  // row-major, out x in
    std::vector<double> bias;     // out
    Activation activation = Activation::Tanh;

    bool operator==(const Layer&) const = default;
};

// Feedforward network. Normalization models are 2 -> ... -> 2, all tanh.
struct MlpModel {
    std::vector<Layer> layers;

    std::size_t parameter_count() const;
    bool operator==(const MlpModel&) const = default;
};

struct Sample {
    Vec2 input;
    Vec2 target;
};

struct Dataset {
    std::vector<Sample> samples;
};

struct TrainConfig {
    int epochs = 400;
    int batch_size = 16;
    double learning_rate = 1e-3;
    std::uint64_t seed = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct TrainResult {
    MlpModel model;
    std::vector<double> loss_history;  // one training-set MSE per epoch
};

// Gradients of the batch MSE loss, same layout as the model parameters.
struct Gradients {
    std::vector<std::vector<double>> weight_grads;
    std::vector<std::vector<double>> bias_grads;
};

class MlpIoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

MlpModel init_model(const std::vector<int>& hidden_sizes, std::uint64_t seed);

Vec2 forward(const MlpModel& model, Vec2 input);

// Batch loss (mean over samples and the 2 output components) and its
// analytic gradients via backpropagation.
double backprop_batch(const MlpModel& model, std::span<const Sample> batch,
                      Gradients& grads);

Dataset generate_norm_dataset(int n, std::uint64_t seed);

std::pair<Dataset, Dataset> split_dataset(const Dataset& d, double train_fraction,
                                          std::uint64_t seed);

TrainResult train(MlpModel model, const Dataset& training_set, const TrainConfig& cfg);

double evaluate_mse(const MlpModel& model, const Dataset& d);

void save_model(const MlpModel& model, const std::filesystem::path& path);
MlpModel load_model(const std::filesystem::path& path);

}  // namespace mmc
