#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mmc/analysis.hpp"
#include "mmc/bench.hpp"
#include "mmc/dyn.hpp"
#include "mmc/io.hpp"
#include "mmc/mlp.hpp"
#include "mmc/mmc_core.hpp"
#include "mmc/svg.hpp"

namespace fs = std::filesystem;
using namespace mmc;

namespace {

// Exit codes: 0 success, 1 runtime/I-O failure, 2 usage error.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_doubles(const std::string& s, std::size_t expected,
                                  const std::string& flag) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(tok, &pos));
            if (pos != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw UsageError(flag + ": cannot parse '" + tok + "' as a number");
        }
    }
    if (out.size() != expected)
        throw UsageError(flag + ": expected " + std::to_string(expected) +
                         " comma-separated values, got " + std::to_string(out.size()));
    return out;
}

std::vector<int> parse_hidden(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        int v = 0;
        try {
            std::size_t pos = 0;
            v = std::stoi(tok, &pos);
            if (pos != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw UsageError("--hidden: cannot parse '" + tok + "'");
        }
        if (v < 1) throw UsageError("--hidden: layer sizes must be >= 1");
        out.push_back(v);
    }
    return out;
}

MlpModel load_model_checked(const std::string& path, const std::string& context) {
    if (path.empty()) throw UsageError(context + " requires --model");
    if (!fs::exists(path)) throw UsageError("model file does not exist: " + path);
    return load_model(path);
}

bench::Mode parse_mode(const std::string& s) {
    if (s == "classical") return bench::Mode::Classical;
    if (s == "neural") return bench::Mode::Neural;
    if (s == "dynamic") return bench::Mode::Dynamic;
    if (s == "dynamic_no_decay") return bench::Mode::DynamicNoDecay;
    throw UsageError("unknown mode '" + s + "' (classical|neural|dynamic|dynamic_no_decay)");
}

struct TrainArgs {
    std::string hidden = "16";
    int epochs = 400;
    int batch = 16;
    double lr = 1e-3;
    std::uint64_t seed = 0;
    int n = 3600;
    double split = 0.8;
    std::string out = "model.json";
    std::string loss_csv;
};

int cmd_train(const TrainArgs& a) {
    const auto hidden = parse_hidden(a.hidden);
    if (a.epochs < 1 || a.batch < 1 || a.lr <= 0.0 || a.n < 2)
        throw UsageError("train: epochs/batch/lr/n out of range");
    if (a.split <= 0.0 || a.split >= 1.0) throw UsageError("train: --split must be in (0, 1)");

    const Dataset data = generate_norm_dataset(a.n, a.seed);
    auto [train_set, test_set] = split_dataset(data, a.split, a.seed + 1);

    TrainConfig cfg;
    cfg.epochs = a.epochs;
    cfg.batch_size = a.batch;
    cfg.learning_rate = a.lr;
    cfg.seed = a.seed + 2;
    MlpModel model = init_model(hidden, a.seed + 3);
    TrainResult res = train(std::move(model), train_set, cfg);

    save_model(res.model, a.out);
    const std::string loss_path =
        a.loss_csv.empty() ? (fs::path(a.out).replace_extension(".loss.csv").string())
                           : a.loss_csv;
    std::ostringstream s;
    s << "epoch,train_mse\n";
    for (std::size_t e = 0; e < res.loss_history.size(); ++e)
        s << (e + 1) << "," << io::fmt(res.loss_history[e]) << "\n";
    io::write_text_file(loss_path, s.str());

    std::cout << "train_mse=" << io::fmt(evaluate_mse(res.model, train_set))
              << " test_mse=" << io::fmt(evaluate_mse(res.model, test_set)) << "\n"
              << "model written to " << a.out << "\n";
    return 0;
}

struct GenDataArgs {
    int n = 3600;
    std::uint64_t seed = 0;
    std::string out = "data.csv";
};

int cmd_gen_data(const GenDataArgs& a) {
    if (a.n < 1) throw UsageError("gen-data: --n must be >= 1");
    const Dataset d = generate_norm_dataset(a.n, a.seed);
    std::ostringstream s;
    s << "input_x,input_y,target_x,target_y\n";
    for (const auto& smp : d.samples)
        s << io::fmt(smp.input.x) << "," << io::fmt(smp.input.y) << ","
          << io::fmt(smp.target.x) << "," << io::fmt(smp.target.y) << "\n";
    io::write_text_file(a.out, s.str());
    std::cout << a.n << " samples written to " << a.out << "\n";
    return 0;
}

struct EvalArgs {
    std::string model;
    int n = 3600;
    std::uint64_t seed = 1;
};

int cmd_eval(const EvalArgs& a) {
    const MlpModel model = load_model_checked(a.model, "eval");
    const Dataset d = generate_norm_dataset(a.n, a.seed);
    std::cout << "mse=" << io::fmt(evaluate_mse(model, d)) << " over " << a.n
              << " samples\n";
    return 0;
}

struct SolveArgs {
    std::string mode = "classical";
    std::string target;
    std::string forward_angles;
    std::string start_angles = "0,0,0";
    int iters = 100;
    std::string model;
    double damping = 10.0;
    double d_vel = 5.0;
    double vel_decay = 0.92;
    std::string out_dir = "solve_out";
    int snapshot_every = 10;
};

int cmd_solve(const SolveArgs& a) {
    const bench::Mode mode = parse_mode(a.mode);

    if (!a.forward_angles.empty()) {
        const auto ang = parse_doubles(a.forward_angles, 3, "--forward");
        MmcConfig cfg;
        cfg.damping = a.damping;
        const Vec2 r = solve_forward(cfg, {ang[0], ang[1], ang[2]}, a.iters);
        std::cout << "end_effector=(" << io::fmt(r.x) << ", " << io::fmt(r.y) << ")\n";
        return 0;
    }
    if (a.target.empty()) throw UsageError("solve: needs --target X,Y or --forward a1,a2,a3");
    if (a.iters < 1) throw UsageError("solve: --iters must be >= 1");

    const auto tv = parse_doubles(a.target, 2, "--target");
    const Vec2 target{tv[0], tv[1]};
    const auto sa = parse_doubles(a.start_angles, 3, "--start");

    MlpModel model;
    MmcConfig cfg;
    cfg.damping = a.damping;
    if (mode != bench::Mode::Classical) {
        model = load_model_checked(a.model, "solve --mode " + a.mode);
        cfg.norm_model = &model;
    }

    MmcState start = initial_state(cfg, {sa[0], sa[1], sa[2]});
    MovementTrace trace;
    if (mode == bench::Mode::Dynamic || mode == bench::Mode::DynamicNoDecay) {
        DynConfig dc;
        dc.velocity_damping = a.d_vel;
        dc.velocity_decay = mode == bench::Mode::DynamicNoDecay ? 1.0 : a.vel_decay;
        DynState ds;
        ds.base = start;
        ds.dyn_proposal = ds.base.seg;
        trace = solve_inverse_dynamic(cfg, dc, ds, target, a.iters);
    } else {
        trace = solve_inverse(cfg, start, target, a.iters);
    }

    fs::create_directories(a.out_dir);
    {
        std::ostringstream s;
        s << "iteration,effector_x,effector_y,distance,norm_distance\n";
        for (std::size_t k = 0; k < trace.states.size(); ++k) {
            const Vec2 e = end_effector(trace.states[k]);
            s << k << "," << io::fmt(e.x) << "," << io::fmt(e.y) << ","
              << io::fmt(trace.distances[k]) << ","
              << io::fmt(trace.distances[k] / trace.start_distance) << "\n";
        }
        io::write_text_file(fs::path(a.out_dir) / "trace.csv", s.str());
    }
    {
        std::vector<svg::ArmPose> poses;
        for (std::size_t k = 0; k < trace.states.size(); k += static_cast<std::size_t>(a.snapshot_every)) {
            const auto& st = trace.states[k];
            svg::ArmPose pose;
            pose.joints = {{0, 0}, st.seg[0], st.seg[0] + st.seg[1],
                           st.seg[0] + st.seg[1] + st.seg[2]};
            poses.push_back(pose);
        }
        const auto& st = trace.states.back();
        poses.push_back({{{0, 0}, st.seg[0], st.seg[0] + st.seg[1],
                          st.seg[0] + st.seg[1] + st.seg[2]},
                         true});
        svg::write_arm_plot(fs::path(a.out_dir) / "arm.svg",
                            "Inverse kinematics (" + a.mode + ")", poses, target);
    }

    std::cout << "final_distance=" << io::fmt(trace.distances.back())
              << " final_norm_distance="
              << io::fmt(trace.distances.back() / trace.start_distance) << "\n";
    return 0;
}

struct BenchArgs {
    std::string mode = "classical";
    std::string model;
    int iters = 100;
    int jobs = 0;
    double damping = 10.0;
    double d_vel = 5.0;
    double vel_decay = 0.92;
    std::string out_dir;
};

int cmd_benchmark(const BenchArgs& a) {
    const bench::Mode mode = parse_mode(a.mode);
    if (a.iters < 1) throw UsageError("benchmark: --iters must be >= 1");

    MlpModel model;
    bench::BenchConfig cfg;
    cfg.damping = a.damping;
    cfg.dyn.velocity_damping = a.d_vel;
    cfg.dyn.velocity_decay = a.vel_decay;
    cfg.iterations = a.iters;
    cfg.jobs = a.jobs;
    if (mode != bench::Mode::Classical) {
        model = load_model_checked(a.model, "benchmark --mode " + a.mode);
        cfg.model = &model;
    }

    const bench::BenchmarkResult res = bench::run_benchmark(mode, cfg);
    const std::string out_dir = a.out_dir.empty() ? "results/" + res.mode : a.out_dir;
    bench::write_results(res, out_dir);

    std::cout << "mode=" << res.mode << " movements=" << res.traces.size()
              << " final_mean_norm_distance=" << io::fmt(res.final_mean_norm_distance)
              << " peak_mean_velocity=" << io::fmt(res.peak_mean_velocity)
              << " peak_velocity_iteration=" << res.peak_velocity_iteration
              << " overshoot_count=" << res.overshoot_count << "\n"
              << "results written to " << out_dir << "\n";
    return 0;
}

struct ProfileArgs {
    std::string model;
    int layer = 0;
    int samples = 360;
    double input_length = 1.0;
    bool field = false;
    double grid_extent = 2.0;
    int grid_steps = 21;
    std::string out_dir = "profile_out";
};

int cmd_profile(const ProfileArgs& a) {
    const MlpModel model = load_model_checked(a.model, "profile");
    if (a.layer < 0 || a.layer + 1 >= static_cast<int>(model.layers.size()))
        throw UsageError("profile: --layer out of range for this model");

    fs::create_directories(a.out_dir);
    const auto profile = analysis::hidden_profile(model, a.layer, a.samples, a.input_length);
    analysis::write_profile_csv(profile, fs::path(a.out_dir) / "profile.csv");
    analysis::write_profile_svg(profile, fs::path(a.out_dir) / "profile.svg");
    std::cout << "profile.csv written ("
              << (profile.activations.empty() ? 0 : profile.activations[0].size())
              << " units)\n";

    if (a.field) {
        const auto field = analysis::displacement_field(model, a.grid_extent, a.grid_steps);
        analysis::write_field_csv(field, fs::path(a.out_dir) / "field.csv");
        analysis::write_field_svg(field, a.grid_extent, fs::path(a.out_dir) / "field.svg");
        std::cout << "field.csv written (" << field.grid_points.size() << " points)\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Recurrent body model of a three-segment planar arm "
                 "(multiple-computation network with learned normalization)"};
    app.require_subcommand(1);

    GenDataArgs gen_args;
    auto* gen = app.add_subcommand("gen-data", "Generate a normalization dataset CSV");
    gen->add_option("--n", gen_args.n, "Number of samples")->capture_default_str();
    gen->add_option("--seed", gen_args.seed, "RNG seed")->capture_default_str();
    gen->add_option("--out", gen_args.out, "Output CSV path")->capture_default_str();

    TrainArgs train_args;
    auto* tr = app.add_subcommand("train", "Train a normalization network");
    tr->add_option("--hidden", train_args.hidden, "Hidden layer sizes, e.g. 16,16")
        ->capture_default_str();
    tr->add_option("--epochs", train_args.epochs, "Training epochs")->capture_default_str();
    tr->add_option("--batch", train_args.batch, "Mini-batch size")->capture_default_str();
    tr->add_option("--lr", train_args.lr, "Learning rate")->capture_default_str();
    tr->add_option("--seed", train_args.seed, "RNG seed")->capture_default_str();
    tr->add_option("--n", train_args.n, "Dataset size")->capture_default_str();
    tr->add_option("--split", train_args.split, "Training fraction")->capture_default_str();
    tr->add_option("--out", train_args.out, "Model output path")->capture_default_str();
    tr->add_option("--loss-csv", train_args.loss_csv, "Loss history CSV path");

    EvalArgs eval_args;
    auto* ev = app.add_subcommand("eval", "Evaluate a model on a fresh dataset");
    ev->add_option("--model", eval_args.model, "Model file")->capture_default_str();
    ev->add_option("--n", eval_args.n, "Dataset size")->capture_default_str();
    ev->add_option("--seed", eval_args.seed, "Dataset seed")->capture_default_str();

    SolveArgs solve_args;
    auto* so = app.add_subcommand("solve", "Solve an inverse or forward kinematic task");
    so->add_option("--mode", solve_args.mode,
                   "classical|neural|dynamic|dynamic_no_decay")->capture_default_str();
    so->add_option("--target", solve_args.target, "Inverse task target X,Y");
    so->add_option("--forward", solve_args.forward_angles,
                   "Forward task segment angles a1,a2,a3 [rad]");
    so->add_option("--start", solve_args.start_angles, "Start segment angles a1,a2,a3 [rad]")
        ->capture_default_str();
    so->add_option("--iters", solve_args.iters, "Iteration count")->capture_default_str();
    so->add_option("--model", solve_args.model, "Normalization model (non-classical modes)");
    so->add_option("--damping", solve_args.damping, "Damping factor d")->capture_default_str();
    so->add_option("--d-vel", solve_args.d_vel, "Velocity damping")->capture_default_str();
    so->add_option("--vel-decay", solve_args.vel_decay, "Velocity decay")->capture_default_str();
    so->add_option("--out-dir", solve_args.out_dir, "Output directory")->capture_default_str();
    so->add_option("--snapshot-every", solve_args.snapshot_every,
                   "Arm snapshot interval (SVG)")->capture_default_str();

    BenchArgs bench_args;
    auto* be = app.add_subcommand("benchmark", "Run the 420-movement reaching benchmark");
    be->add_option("--mode", bench_args.mode,
                   "classical|neural|dynamic|dynamic_no_decay")->capture_default_str();
    be->add_option("--model", bench_args.model, "Normalization model (non-classical modes)");
    be->add_option("--iters", bench_args.iters, "Iterations per movement")->capture_default_str();
    be->add_option("--jobs", bench_args.jobs, "Worker threads (0 = all cores, 1 = serial)")
        ->capture_default_str();
    be->add_option("--damping", bench_args.damping, "Damping factor d")->capture_default_str();
    be->add_option("--d-vel", bench_args.d_vel, "Velocity damping")->capture_default_str();
    be->add_option("--vel-decay", bench_args.vel_decay, "Velocity decay")->capture_default_str();
    be->add_option("--out-dir", bench_args.out_dir, "Output directory (default results/<mode>)");

    ProfileArgs prof_args;
    auto* pr = app.add_subcommand("profile", "Hidden-unit profiles and displacement field");
    pr->add_option("--model", prof_args.model, "Model file");
    pr->add_option("--layer", prof_args.layer, "Hidden layer index")->capture_default_str();
    pr->add_option("--samples", prof_args.samples, "Angle sweep resolution")->capture_default_str();
    pr->add_option("--input-length", prof_args.input_length, "Sweep input length")
        ->capture_default_str();
    pr->add_flag("--field", prof_args.field, "Also emit the displacement field");
    pr->add_option("--grid-extent", prof_args.grid_extent, "Field grid half-extent")
        ->capture_default_str();
    pr->add_option("--grid-steps", prof_args.grid_steps, "Field grid steps per axis")
        ->capture_default_str();
    pr->add_option("--out-dir", prof_args.out_dir, "Output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (gen->parsed()) return cmd_gen_data(gen_args);
        if (tr->parsed()) return cmd_train(train_args);
        if (ev->parsed()) return cmd_eval(eval_args);
        if (so->parsed()) return cmd_solve(solve_args);
        if (be->parsed()) return cmd_benchmark(bench_args);
        if (pr->parsed()) return cmd_profile(prof_args);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
