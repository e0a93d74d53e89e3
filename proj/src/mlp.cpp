#include "mmc/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include <json.hpp>

namespace mmc {

namespace {

void apply_layer(const Layer& layer, const double* in, double* out) {
    for (int o = 0; o < layer.out; ++o) {
        double acc = layer.bias[static_cast<std::size_t>(o)];
        const double* w = layer.weights.data() + static_cast<std::size_t>(o) * layer.in;
        for (int i = 0; i < layer.in; ++i) acc += w[i] * in[i];
        out[o] = layer.activation == Activation::Tanh ? std::tanh(acc) : acc;
    }
}

std::size_t max_width(const MlpModel& model) {
    std::size_t w = 2;
    for (const auto& l : model.layers) w = std::max(w, static_cast<std::size_t>(l.out));
    return w;
}

}  // namespace

std::size_t MlpModel::parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.weights.size() + l.bias.size();
    return n;
}

MlpModel init_model(const std::vector<int>& hidden_sizes, std::uint64_t seed) {
    for (int h : hidden_sizes) {
        if (h < 1) throw std::invalid_argument("init_model: hidden size must be >= 1");
    }
    std::vector<int> dims;
    dims.push_back(2);
    dims.insert(dims.end(), hidden_sizes.begin(), hidden_sizes.end());
    dims.push_back(2);

    std::mt19937_64 rng(seed);
    MlpModel model;
    for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
        Layer layer;
        layer.in = dims[k];
        layer.out = dims[k + 1];
        layer.activation = Activation::Tanh;
        const double limit = std::sqrt(6.0 / (layer.in + layer.out));
        std::uniform_real_distribution<double> dist(-limit, limit);
        layer.weights.resize(static_cast<std::size_t>(layer.in) * layer.out);
        for (auto& w : layer.weights) w = dist(rng);
        layer.bias.assign(static_cast<std::size_t>(layer.out), 0.0);
        model.layers.push_back(std::move(layer));
    }
    return model;
}

Vec2 forward(const MlpModel& model, Vec2 input) {
    std::vector<double> buf_a(max_width(model)), buf_b(max_width(model));
    buf_a[0] = input.x;
    buf_a[1] = input.y;
    double* cur = buf_a.data();
    double* next = buf_b.data();
    for (const auto& layer : model.layers) {
        apply_layer(layer, cur, next);
        std::swap(cur, next);
    }
    return {cur[0], cur[1]};
}

double backprop_batch(const MlpModel& model, std::span<const Sample> batch,
                      Gradients& grads) {
    const std::size_t n_layers = model.layers.size();
    grads.weight_grads.resize(n_layers);
    grads.bias_grads.resize(n_layers);
    for (std::size_t k = 0; k < n_layers; ++k) {
        grads.weight_grads[k].assign(model.layers[k].weights.size(), 0.0);
        grads.bias_grads[k].assign(model.layers[k].bias.size(), 0.0);
    }

    // activations[k] = input to layer k; activations[n_layers] = network output
    std::vector<std::vector<double>> activations(n_layers + 1);
    std::vector<double> delta, delta_prev;
    double loss = 0.0;
    const double inv_norm = 1.0 / (static_cast<double>(batch.size()) * 2.0);

    for (const Sample& s : batch) {
        activations[0] = {s.input.x, s.input.y};
        for (std::size_t k = 0; k < n_layers; ++k) {
            const Layer& l = model.layers[k];
            activations[k + 1].assign(static_cast<std::size_t>(l.out), 0.0);
            apply_layer(l, activations[k].data(), activations[k + 1].data());
        }

        const auto& out = activations[n_layers];
        const double ex = out[0] - s.target.x;
        const double ey = out[1] - s.target.y;
        loss += (ex * ex + ey * ey) * inv_norm;

        // dL/d(output), scaled by the batch-and-component mean
        delta = {2.0 * ex * inv_norm, 2.0 * ey * inv_norm};

        for (std::size_t k = n_layers; k-- > 0;) {
            const Layer& l = model.layers[k];
            // back through the activation
            if (l.activation == Activation::Tanh) {
                for (int o = 0; o < l.out; ++o) {
                    const double y = activations[k + 1][static_cast<std::size_t>(o)];
                    delta[static_cast<std::size_t>(o)] *= 1.0 - y * y;
                }
            }
            auto& wg = grads.weight_grads[k];
            auto& bg = grads.bias_grads[k];
            const auto& in = activations[k];
            delta_prev.assign(static_cast<std::size_t>(l.in), 0.0);
            for (int o = 0; o < l.out; ++o) {
                const double d = delta[static_cast<std::size_t>(o)];
                bg[static_cast<std::size_t>(o)] += d;
                const double* w = l.weights.data() + static_cast<std::size_t>(o) * l.in;
                double* g = wg.data() + static_cast<std::size_t>(o) * l.in;
                for (int i = 0; i < l.in; ++i) {
                    g[i] += d * in[static_cast<std::size_t>(i)];
                    delta_prev[static_cast<std::size_t>(i)] += d * w[i];
                }
            }
            delta = delta_prev;
        }
    }
    return loss;
}

Dataset generate_norm_dataset(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("generate_norm_dataset: n must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> len_dist(0.0, 2.0);
    Dataset d;
    d.samples.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double theta = 2.0 * std::numbers::pi * k / n;
        const Vec2 unit = from_angle(theta, 1.0);
        // uniform on ]0, 2]
        const double len = 2.0 - len_dist(rng);
        d.samples.push_back({unit * len, unit});
    }
    return d;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& d, double train_fraction,
                                          std::uint64_t seed) {
    if (train_fraction <= 0.0 || train_fraction >= 1.0)
        throw std::invalid_argument("split_dataset: train_fraction must be in (0, 1)");
    std::vector<std::size_t> idx(d.samples.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);

    const auto n_train =
        static_cast<std::size_t>(std::floor(static_cast<double>(d.samples.size()) * train_fraction));
    Dataset train_set, test_set;
    for (std::size_t k = 0; k < idx.size(); ++k)
        (k < n_train ? train_set : test_set).samples.push_back(d.samples[idx[k]]);
    return {std::move(train_set), std::move(test_set)};
}

TrainResult train(MlpModel model, const Dataset& training_set, const TrainConfig& cfg) {
    if (training_set.samples.empty())
        throw std::invalid_argument("train: empty training set");
    if (cfg.epochs < 0 || cfg.batch_size < 1 || cfg.learning_rate <= 0.0)
        throw std::invalid_argument("train: invalid config");

    const std::size_t n_layers = model.layers.size();
    Gradients grads;
    Gradients m, v;  // Adam moment estimates
    m.weight_grads.resize(n_layers);
    m.bias_grads.resize(n_layers);
    v.weight_grads.resize(n_layers);
    v.bias_grads.resize(n_layers);
    for (std::size_t k = 0; k < n_layers; ++k) {
        m.weight_grads[k].assign(model.layers[k].weights.size(), 0.0);
        m.bias_grads[k].assign(model.layers[k].bias.size(), 0.0);
        v.weight_grads[k].assign(model.layers[k].weights.size(), 0.0);
        v.bias_grads[k].assign(model.layers[k].bias.size(), 0.0);
    }

    auto adam_update = [&](std::vector<double>& params, const std::vector<double>& g,
                           std::vector<double>& mk, std::vector<double>& vk,
                           double bc1, double bc2) {
        for (std::size_t i = 0; i < params.size(); ++i) {
            mk[i] = cfg.beta1 * mk[i] + (1.0 - cfg.beta1) * g[i];
            vk[i] = cfg.beta2 * vk[i] + (1.0 - cfg.beta2) * g[i] * g[i];
            const double m_hat = mk[i] / bc1;
            const double v_hat = vk[i] / bc2;
            params[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
        }
    };

    std::mt19937_64 rng(cfg.seed);
    std::vector<std::size_t> order(training_set.samples.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<Sample> batch;
    std::vector<double> history;
    history.reserve(static_cast<std::size_t>(cfg.epochs));
    std::uint64_t step = 0;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t pos = 0; pos < order.size(); pos += static_cast<std::size_t>(cfg.batch_size)) {
            batch.clear();
            const std::size_t end = std::min(order.size(), pos + static_cast<std::size_t>(cfg.batch_size));
            for (std::size_t k = pos; k < end; ++k)
                batch.push_back(training_set.samples[order[k]]);
            backprop_batch(model, batch, grads);
            ++step;
            const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
            const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
            for (std::size_t k = 0; k < n_layers; ++k) {
                adam_update(model.layers[k].weights, grads.weight_grads[k],
                            m.weight_grads[k], v.weight_grads[k], bc1, bc2);
                adam_update(model.layers[k].bias, grads.bias_grads[k],
                            m.bias_grads[k], v.bias_grads[k], bc1, bc2);
            }
        }
        history.push_back(evaluate_mse(model, training_set));
    }
    return {std::move(model), std::move(history)};
}

double evaluate_mse(const MlpModel& model, const Dataset& d) {
    if (d.samples.empty()) throw std::invalid_argument("evaluate_mse: empty dataset");
    double acc = 0.0;
    for (const Sample& s : d.samples) {
        const Vec2 out = forward(model, s.input);
        const Vec2 e = out - s.target;
        acc += (e.x * e.x + e.y * e.y) * 0.5;
    }
    return acc / static_cast<double>(d.samples.size());
}

void save_model(const MlpModel& model, const std::filesystem::path& path) {
    nlohmann::json j;
    j["layers"] = nlohmann::json::array();
    for (const auto& l : model.layers) {
        j["layers"].push_back({
            {"in", l.in},
            {"out", l.out},
            {"activation", l.activation == Activation::Tanh ? "tanh" : "linear"},
            {"weights", l.weights},
            {"bias", l.bias},
        });
    }
    std::ofstream out(path);
    if (!out) throw MlpIoError("cannot open model file for writing: " + path.string());
    out << j.dump(2) << "\n";
    if (!out) throw MlpIoError("write failed: " + path.string());
}

MlpModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MlpIoError("cannot open model file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw MlpIoError("malformed model file " + path.string() + ": " + e.what());
    }

    MlpModel model;
    try {
        for (const auto& jl : j.at("layers")) {
            Layer l;
            l.in = jl.at("in").get<int>();
            l.out = jl.at("out").get<int>();
            const auto act = jl.at("activation").get<std::string>();
            if (act == "tanh")
                l.activation = Activation::Tanh;
            else if (act == "linear")
                l.activation = Activation::Linear;
            else
                throw MlpIoError("unknown activation '" + act + "' in " + path.string());
            l.weights = jl.at("weights").get<std::vector<double>>();
            l.bias = jl.at("bias").get<std::vector<double>>();
            if (l.in < 1 || l.out < 1 ||
                l.weights.size() != static_cast<std::size_t>(l.in) * l.out ||
                l.bias.size() != static_cast<std::size_t>(l.out))
                throw MlpIoError("layer dimension mismatch in " + path.string());
            model.layers.push_back(std::move(l));
        }
    } catch (const nlohmann::json::exception& e) {
        throw MlpIoError("malformed model file " + path.string() + ": " + e.what());
    }

    if (model.layers.empty()) throw MlpIoError("model has no layers: " + path.string());
    for (std::size_t k = 1; k < model.layers.size(); ++k) {
        if (model.layers[k].in != model.layers[k - 1].out)
            throw MlpIoError("layer dimensions do not chain in " + path.string());
    }
    for (const auto& l : model.layers) {
        for (double w : l.weights)
            if (!std::isfinite(w)) throw MlpIoError("non-finite weight in " + path.string());
        for (double b : l.bias)
            if (!std::isfinite(b)) throw MlpIoError("non-finite bias in " + path.string());
    }
    return model;
}

}  // namespace mmc
