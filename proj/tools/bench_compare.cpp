// Timing comparison between the serial reference benchmark runner and the
// OpenMP-parallel one, with a check that both produce identical aggregates.
#include <chrono>
#include <cmath>
#include <cstdio>

#include "mmc/bench.hpp"
#include "mmc/mlp.hpp"

using namespace mmc;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool identical(const bench::BenchmarkResult& a, const bench::BenchmarkResult& b) {
    if (a.mean_norm_distance != b.mean_norm_distance) return false;
    if (a.std_norm_distance != b.std_norm_distance) return false;
    if (a.mean_velocity != b.mean_velocity) return false;
    return a.overshoot_count == b.overshoot_count &&
           a.peak_velocity_iteration == b.peak_velocity_iteration;
}

}  // namespace

int compare_mode(bench::Mode mode, const bench::BenchConfig& cfg) {
    auto t0 = Clock::now();
    const auto serial = bench::run_benchmark_serial(mode, cfg);
    const double t_serial = seconds_since(t0);

    t0 = Clock::now();
    const auto parallel = bench::run_benchmark(mode, cfg);
    const double t_parallel = seconds_since(t0);

    std::printf("%s benchmark, %zu movements, %d iterations\n",
                bench::mode_name(mode).c_str(), serial.traces.size(), cfg.iterations);
    std::printf("  serial:   %8.3f s\n", t_serial);
    std::printf("  parallel: %8.3f s  (speedup %.2fx)\n", t_parallel, t_serial / t_parallel);

    if (!identical(serial, parallel)) {
        std::printf("  MISMATCH: serial and parallel aggregates differ\n");
        return 1;
    }
    std::printf("  aggregates identical\n");
    return 0;
}

int main() {
    bench::BenchConfig cfg;
    int rc = compare_mode(bench::Mode::Classical, cfg);

    // Heavier workload: neural normalization runs a network forward pass per
    // segment per iteration, which is where the parallel runner pays off.
    std::printf("training [16,16] normalization model...\n");
    const Dataset data = generate_norm_dataset(3600, 0);
    const auto [train_set, test_set] = split_dataset(data, 0.8, 1);
    TrainConfig tc;
    tc.seed = 2;
    const auto trained = train(init_model({16, 16}, 3), train_set, tc);
    cfg.model = &trained.model;
    cfg.iterations = 1000;
    rc += compare_mode(bench::Mode::Neural, cfg);
    rc += compare_mode(bench::Mode::Dynamic, cfg);
    return rc;
}
