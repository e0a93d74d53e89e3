// Acceptance suite: runs every gate criterion and prints one line per
// criterion. Exit code is the number of failed criteria.
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mmc/analysis.hpp"
#include "mmc/bench.hpp"
#include "mmc/dyn.hpp"
#include "mmc/mlp.hpp"
#include "mmc/mmc_core.hpp"

using namespace mmc;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;
using std::numbers::pi;

namespace {

int g_failures = 0;

void report(int id, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct TrainedRun {
    MlpModel model;
    double test_mse = 0.0;
};

// Same dataset/seed conventions as the CLI train command.
TrainedRun train_arch(const std::vector<int>& hidden, std::uint64_t seed) {
    const Dataset data = generate_norm_dataset(3600, seed);
    auto [train_set, test_set] = split_dataset(data, 0.8, seed + 1);
    TrainConfig cfg;
    cfg.epochs = 400;
    cfg.batch_size = 16;
    cfg.seed = seed + 2;
    TrainResult res = train(init_model(hidden, seed + 3), train_set, cfg);
    const double test_mse = evaluate_mse(res.model, test_set);
    return {std::move(res.model), test_mse};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_cli(const std::string& cli, const std::string& args) {
    const std::string cmd = "\"" + cli + "\" " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli_path = argc > 1 ? argv[1] : "";
    const int n_seeds = 5;

    // --- normalization training runs (shared by criteria 1, 2, 8-11) ---
    std::map<std::string, std::vector<TrainedRun>> runs;
    const std::vector<std::pair<std::string, std::vector<int>>> archs = {
        {"4", {4}}, {"8", {8}}, {"16", {16}}, {"32", {32}}, {"16,16", {16, 16}}};

    double t_single16 = 0.0;
    for (const auto& [name, hidden] : archs) {
        const auto t0 = Clock::now();
        auto& vec = runs[name];
        for (int s = 0; s < n_seeds; ++s)
            vec.push_back(train_arch(hidden, static_cast<std::uint64_t>(s)));
        if (name == "16") t_single16 = seconds_since(t0);
    }
    auto mean_mse = [&](const std::string& name) {
        double acc = 0.0;
        for (const auto& r : runs[name]) acc += r.test_mse;
        return acc / n_seeds;
    };

    // 1. single hidden layer of 16: mean held-out MSE over 5 seeds <= 0.01
    {
        const double m = mean_mse("16");
        report(1, m <= 0.01 && t_single16 < 120.0,
               "hidden [16]: mean test MSE " + fmt(m) + " <= 0.01, 5 runs in " +
                   fmt(t_single16) + " s < 120 s");
    }

    // 2. two hidden layers of 16 and the architecture-sweep shape
    {
        const double m44 = mean_mse("4"), m8 = mean_mse("8"), m16 = mean_mse("16");
        const double m3232 = mean_mse("32"), m1616 = mean_mse("16,16");
        const bool ok = m1616 <= 0.002 && m16 < m8 && m8 < m44 && m1616 < m16;
        report(2, ok,
               "hidden [16,16]: mean test MSE " + fmt(m1616) + " <= 0.002; sweep 4/8/16/32/16,16 = " +
                   fmt(m44) + "/" + fmt(m8) + "/" + fmt(m16) + "/" + fmt(m3232) + "/" + fmt(m1616));
    }

    // 3. analytic gradients vs central finite differences on 100 random models
    {
        std::mt19937_64 rng(1234);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        const double h = 1e-6;
        bool ok = true;
        double worst = 0.0;
        for (int trial = 0; trial < 100 && ok; ++trial) {
            MlpModel model = init_model({3}, 500 + static_cast<std::uint64_t>(trial));
            Dataset batch;
            for (int k = 0; k < 4; ++k)
                batch.samples.push_back({{dist(rng), dist(rng)}, {dist(rng), dist(rng)}});
            Gradients grads;
            backprop_batch(model, batch.samples, grads);
            for (std::size_t l = 0; l < model.layers.size() && ok; ++l) {
                auto check_param = [&](bool is_weight, std::size_t i) {
                    MlpModel up = model, down = model;
                    auto& pu = is_weight ? up.layers[l].weights[i] : up.layers[l].bias[i];
                    auto& pd = is_weight ? down.layers[l].weights[i] : down.layers[l].bias[i];
                    pu += h;
                    pd -= h;
                    const double fd = (evaluate_mse(up, batch) - evaluate_mse(down, batch)) / (2 * h);
                    const double an = is_weight ? grads.weight_grads[l][i] : grads.bias_grads[l][i];
                    const double rel =
                        std::abs(an - fd) / std::max({std::abs(an), std::abs(fd), 1e-3});
                    worst = std::max(worst, rel);
                    if (rel > 1e-4) ok = false;
                };
                for (std::size_t i = 0; i < model.layers[l].weights.size() && ok; ++i)
                    check_param(true, i);
                for (std::size_t i = 0; i < model.layers[l].bias.size() && ok; ++i)
                    check_param(false, i);
            }
        }
        report(3, ok, "gradient check on 100 random 2-3-2 models, worst relative error " + fmt(worst));
    }

    // 4. fixed point: 1000 random consistent states, R clamped at own end effector
    {
        MmcConfig cfg;
        std::mt19937_64 rng(77);
        std::uniform_real_distribution<double> dist(0.0, 2 * pi);
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k) {
            MmcState s = initial_state(cfg, {dist(rng), dist(rng), dist(rng)});
            s.effector = end_effector(s);
            s.clamp(Var::R);
            const MmcState before = s;
            iterate(s, cfg);
            for (int i = 0; i < 3; ++i) {
                worst = std::max(worst, std::abs(s.seg[static_cast<std::size_t>(i)].x -
                                                 before.seg[static_cast<std::size_t>(i)].x));
                worst = std::max(worst, std::abs(s.seg[static_cast<std::size_t>(i)].y -
                                                 before.seg[static_cast<std::size_t>(i)].y));
            }
            for (int i = 0; i < 2; ++i) {
                worst = std::max(worst, std::abs(s.diag[static_cast<std::size_t>(i)].x -
                                                 before.diag[static_cast<std::size_t>(i)].x));
                worst = std::max(worst, std::abs(s.diag[static_cast<std::size_t>(i)].y -
                                                 before.diag[static_cast<std::size_t>(i)].y));
            }
        }
        report(4, worst <= 1e-12,
               "1000 consistent states invariant under iterate, worst drift " + fmt(worst));
    }

    // 5. hand-computed step oracle
    {
        MmcConfig cfg;
        MmcState s = initial_state(cfg, {0, 0, 0});
        s.effector = {0, 3};
        s.clamp(Var::R);
        linear_step(s, cfg);
        const bool proposal_exact = s.proposal[0].x == 0.7 && s.proposal[0].y == 0.3;

        DynConfig dc;
        const Vec2 v1 = velocity_update({0, 0}, s.proposal[0], {1, 0}, dc);
        const bool vel_ok = std::abs(v1.x - (-0.06)) <= 1e-15 && std::abs(v1.y - 0.06) <= 1e-15;
        report(5, proposal_exact && vel_ok,
               "first L1 proposal (" + fmt(s.proposal[0].x) + ", " + fmt(s.proposal[0].y) +
                   ") exact; first velocity (" + fmt(v1.x) + ", " + fmt(v1.y) + ")");
    }

    // 6. forward kinematics vs analytic segment sum
    {
        MmcConfig cfg;
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> dist(0.0, 2 * pi);
        double worst = 0.0;
        for (int k = 0; k < 100; ++k) {
            const std::array<double, 3> ang{dist(rng), dist(rng), dist(rng)};
            const Vec2 expected =
                from_angle(ang[0], 1) + from_angle(ang[1], 1) + from_angle(ang[2], 1);
            const Vec2 got = solve_forward(cfg, ang, 100);
            worst = std::max(worst, distance(got, expected));
        }
        report(6, worst <= 1e-6, "100 random forward solves, worst deviation " + fmt(worst));
    }

    // --- benchmark runs (criteria 7-10) ---
    const MlpModel& model1616 = runs["16,16"][0].model;
    bench::BenchConfig bcfg;
    bcfg.model = &model1616;

    const auto t_bench0 = Clock::now();
    const auto classical = bench::run_benchmark(bench::Mode::Classical, bcfg);
    const double t_classical = seconds_since(t_bench0);
    const auto neural = bench::run_benchmark(bench::Mode::Neural, bcfg);
    const auto dynamic = bench::run_benchmark(bench::Mode::Dynamic, bcfg);
    const auto no_decay = bench::run_benchmark(bench::Mode::DynamicNoDecay, bcfg);

    // 7. classical benchmark shape
    {
        bool monotone = true;
        for (std::size_t k = 1; k + 1 < classical.mean_norm_distance.size(); ++k)
            if (classical.mean_norm_distance[k + 1] > classical.mean_norm_distance[k] + 1e-3)
                monotone = false;
        const bool ok = classical.traces.size() == 420 && t_classical < 30.0 &&
                        classical.mean_norm_distance[0] == 1.0 && monotone &&
                        classical.mean_norm_distance[100] <= 0.05;
        report(7, ok,
               "classical: 420 movements in " + fmt(t_classical) + " s, start 1, " +
                   std::string(monotone ? "monotone" : "NOT monotone") +
                   ", mean norm distance at 100 = " +
                   fmt(classical.mean_norm_distance[100]) + " <= 0.05");
    }

    // 8. neural vs classical gap at iteration 100
    {
        const double gap =
            std::abs(neural.mean_norm_distance[100] - classical.mean_norm_distance[100]);
        report(8, gap <= 0.05,
               "neural [16,16] vs classical at 100: " + fmt(neural.mean_norm_distance[100]) +
                   " vs " + fmt(classical.mean_norm_distance[100]) + ", gap " + fmt(gap) +
                   " <= 0.05");
    }

    // 9. dynamic velocity properties
    {
        const bool a = dynamic.peak_mean_velocity < classical.peak_mean_velocity;
        const bool b = classical.peak_velocity_iteration == 1 &&
                       dynamic.peak_velocity_iteration >= 3;
        const bool c = dynamic.overshoot_count < no_decay.overshoot_count;
        const bool d = dynamic.final_mean_norm_distance <= no_decay.final_mean_norm_distance;
        auto tag = [](bool ok) { return ok ? "ok" : "FAIL"; };
        report(9, a && b && c && d,
               std::string("(a) peaks ") + fmt(dynamic.peak_mean_velocity) + " < " +
                   fmt(classical.peak_mean_velocity) + " " + tag(a) + "; (b) peak iters " +
                   std::to_string(classical.peak_velocity_iteration) + "/" +
                   std::to_string(dynamic.peak_velocity_iteration) + " " + tag(b) +
                   "; (c) overshoots " + std::to_string(dynamic.overshoot_count) + " < " +
                   std::to_string(no_decay.overshoot_count) + " " + tag(c) + "; (d) finals " +
                   fmt(dynamic.final_mean_norm_distance) + " <= " +
                   fmt(no_decay.final_mean_norm_distance) + " " + tag(d));
    }

    // 10. segment-length invariant across all dynamic-mode iterations
    {
        report(10, dynamic.max_segment_drift <= 0.05,
               "dynamic-mode max |length(Li) - 1| = " + fmt(dynamic.max_segment_drift) +
                   " <= 0.05");
    }

    // 11. hidden-unit population code for 4- and 8-unit models
    {
        bool ok = true;
        std::string detail;
        for (const std::string name : {"4", "8"}) {
            const MlpModel& m = runs[name][0].model;
            const auto profile = analysis::hidden_profile(m, 0, 360, 1.0);
            const auto peaks = analysis::peak_angles(profile);

            const std::size_t n_units = peaks.size();
            double min_range = 1e9;
            for (std::size_t u = 0; u < n_units; ++u) {
                double lo = 1e9, hi = -1e9;
                for (const auto& row : profile.activations) {
                    lo = std::min(lo, row[u]);
                    hi = std::max(hi, row[u]);
                }
                min_range = std::min(min_range, hi - lo);
            }

            auto sorted = peaks;
            std::sort(sorted.begin(), sorted.end());
            bool distinct = true;
            double max_gap = 0.0;
            for (std::size_t u = 0; u < n_units; ++u) {
                const double next = u + 1 < n_units ? sorted[u + 1] : sorted[0] + 2 * pi;
                const double gap = next - sorted[u];
                if (gap == 0.0) distinct = false;
                max_gap = std::max(max_gap, gap);
            }

            const bool this_ok = min_range > 0.1 && distinct && max_gap < pi;
            ok = ok && this_ok;
            detail += "[" + name + " units: min range " + fmt(min_range) + ", " +
                      (distinct ? "distinct peaks" : "DUPLICATE peaks") + ", max circular gap " +
                      fmt(max_gap) + "] ";
        }
        report(11, ok, detail + "(need range > 0.1, distinct, gap < pi)");
    }

    // 12. CLI determinism: repeated seeded commands give byte-identical CSVs
    {
        bool ok = false;
        std::string detail = "no CLI path given";
        if (!cli_path.empty()) {
            const fs::path dir = fs::temp_directory_path() / "mmc_acceptance_cli";
            fs::remove_all(dir);
            fs::create_directories(dir);
            const std::string d = dir.string();
            ok = true;

            ok &= run_cli(cli_path, "gen-data --n 200 --seed 3 --out " + d + "/d1.csv") == 0;
            ok &= run_cli(cli_path, "gen-data --n 200 --seed 3 --out " + d + "/d2.csv") == 0;
            ok &= !slurp(dir / "d1.csv").empty() && slurp(dir / "d1.csv") == slurp(dir / "d2.csv");

            const std::string train_flags = "train --hidden 4 --epochs 3 --n 200 --seed 9 ";
            ok &= run_cli(cli_path, train_flags + "--out " + d + "/m1.json --loss-csv " + d + "/l1.csv") == 0;
            ok &= run_cli(cli_path, train_flags + "--out " + d + "/m2.json --loss-csv " + d + "/l2.csv") == 0;
            ok &= !slurp(dir / "m1.json").empty() && slurp(dir / "m1.json") == slurp(dir / "m2.json");
            ok &= slurp(dir / "l1.csv") == slurp(dir / "l2.csv");

            const std::string bench_flags = "benchmark --mode classical --iters 10 --jobs 2 ";
            ok &= run_cli(cli_path, bench_flags + "--out-dir " + d + "/b1") == 0;
            ok &= run_cli(cli_path, bench_flags + "--out-dir " + d + "/b2") == 0;
            ok &= !slurp(dir / "b1/curves.csv").empty() &&
                  slurp(dir / "b1/curves.csv") == slurp(dir / "b2/curves.csv");
            ok &= slurp(dir / "b1/movements.csv") == slurp(dir / "b2/movements.csv");

            detail = ok ? "gen-data, train and benchmark re-runs byte-identical"
                        : "outputs differ or a command failed";
            fs::remove_all(dir);
        }
        report(12, ok, detail);
    }

    std::printf("%d of 12 criteria passed\n", 12 - g_failures);
    return g_failures;
}
