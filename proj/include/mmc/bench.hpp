#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "mmc/dyn.hpp"
#include "mmc/mmc_core.hpp"

namespace mmc::bench {

enum class Mode { Classical, Neural, Dynamic, DynamicNoDecay };

std::string mode_name(Mode mode);

// Classical uses Euclidean normalization regardless of the model; the other
// modes require a trained normalization model.
struct BenchConfig {
    double damping = 10.0;
    DynConfig dyn{};  // decay forced to 1.0 in DynamicNoDecay mode
    const MlpModel* model = nullptr;
    int iterations = 100;
    int start_pose_iterations = 300;
    int jobs = 0;  // 0 = all cores, 1 = serial reference path
    double overshoot_threshold = 0.01;
};

struct TargetGrid {
    std::array<Vec2, 21> points;  // radius-major (1, 2, 3), angle-minor (0..180 deg)
};

struct BenchmarkResult {
    std::string mode;
    std::vector<MovementTrace> traces;             // fixed movement order, 420 entries
    std::vector<double> mean_norm_distance;        // iterations + 1 entries
    std::vector<double> std_norm_distance;         // sample (n-1) convention
    std::vector<double> mean_velocity;             // entry 0 is 0 by convention
    double final_mean_norm_distance = 0.0;
    double peak_mean_velocity = 0.0;
    int peak_velocity_iteration = 0;
    int overshoot_count = 0;
    double max_segment_drift = 0.0;
};

TargetGrid target_grid();

// Converges the classical network from a slightly bent near-vertical pose to
// the start point and strips the clamp, yielding a reproducible start
// configuration. (An exactly straight pose is singular and cannot bend
// towards collinear targets.)
MmcState start_pose_for(Vec2 start, const BenchConfig& cfg);

MovementTrace run_movement(const MmcState& start_state, Vec2 target, Mode mode,
                           const BenchConfig& cfg);

// All 21 x 20 ordered (start, target) pairs. Parallel over movements when
// cfg.jobs != 1; aggregation always runs in fixed movement order.
BenchmarkResult run_benchmark(Mode mode, const BenchConfig& cfg);

// Single-thread reference used by tests and the comparison benchmark.
BenchmarkResult run_benchmark_serial(Mode mode, const BenchConfig& cfg);

// Signed per-iteration decrease of normalized distance.
std::vector<double> velocity_profile(const MovementTrace& trace);

bool detect_overshoot(const MovementTrace& trace, double threshold = 0.01);

// movements.csv, curves.csv, summary.csv plus one SVG per aggregate curve.
void write_results(const BenchmarkResult& result, const std::filesystem::path& directory);

}  // namespace mmc::bench
