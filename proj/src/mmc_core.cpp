#include "mmc/mmc_core.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace mmc {

namespace {

void check_config(const MmcConfig& cfg) {
    if (cfg.damping <= 2.0)
        throw std::invalid_argument("MmcConfig: damping must be > 2");
    for (double l : cfg.segment_lengths)
        if (l <= 0.0) throw std::invalid_argument("MmcConfig: segment lengths must be > 0");
}

// Damped mean of the two closed-chain computations and the previous value.
// Written as a single quotient so the weights sum to one exactly.
Vec2 damped_mean(Vec2 c1, Vec2 c2, Vec2 prev, double d) {
    assert(std::abs((1.0 + 1.0 + (d - 2.0)) / d - 1.0) < 1e-15);
    return (c1 + c2 + (d - 2.0) * prev) / d;
}

}  // namespace

MmcState initial_state(const MmcConfig& cfg, const std::array<double, 3>& segment_angles) {
    check_config(cfg);
    MmcState s;
    for (int i = 0; i < 3; ++i)
        s.seg[static_cast<std::size_t>(i)] =
            from_angle(segment_angles[static_cast<std::size_t>(i)],
                       cfg.segment_lengths[static_cast<std::size_t>(i)]);
    s.proposal = s.seg;
    s.diag[0] = s.seg[0] + s.seg[1];
    s.diag[1] = s.seg[1] + s.seg[2];
    s.effector = s.seg[0] + s.seg[1] + s.seg[2];
    return s;
}

void linear_step(MmcState& state, const MmcConfig& cfg) {
    const double d = cfg.damping;
    const Vec2 L1 = state.seg[0], L2 = state.seg[1], L3 = state.seg[2];
    const Vec2 D1 = state.diag[0], D2 = state.diag[1], R = state.effector;

    state.proposal[0] = state.clamped(Var::L1) ? L1 : damped_mean(D1 - L2, R - D2, L1, d);
    state.proposal[1] = state.clamped(Var::L2) ? L2 : damped_mean(D1 - L1, D2 - L3, L2, d);
    state.proposal[2] = state.clamped(Var::L3) ? L3 : damped_mean(D2 - L2, R - D1, L3, d);
    state.diag[0] = damped_mean(L1 + L2, R - L3, D1, d);
    state.diag[1] = damped_mean(L2 + L3, R - L1, D2, d);
    if (!state.clamped(Var::R))
        state.effector = damped_mean(L1 + D2, D1 + L3, R, d);
}

Vec2 normalize_segment(Vec2 v, double target_len, const MmcConfig& cfg, Vec2 previous) {
    const double len = length(v);
    if (len < cfg.zero_length_epsilon) return previous;
    if (cfg.neural()) return forward(*cfg.norm_model, v) * target_len;
    return v * (target_len / len);
}

void iterate(MmcState& state, const MmcConfig& cfg) {
    linear_step(state, cfg);
    for (std::size_t i = 0; i < 3; ++i) {
        if (state.clamped(static_cast<Var>(i + 1))) continue;
        state.seg[i] = normalize_segment(state.proposal[i], cfg.segment_lengths[i], cfg,
                                         state.seg[i]);
    }
}

Vec2 end_effector(const MmcState& state) {
    return state.seg[0] + state.seg[1] + state.seg[2];
}

namespace {

void record(MovementTrace& trace, const MmcState& state, const MmcConfig& cfg) {
    trace.states.push_back(state);
    trace.distances.push_back(distance(end_effector(state), trace.target));
    for (std::size_t i = 0; i < 3; ++i) {
        const double drift = std::abs(length(state.seg[i]) - cfg.segment_lengths[i]);
        if (drift > trace.max_segment_drift) trace.max_segment_drift = drift;
    }
}

}  // namespace

MovementTrace solve_inverse(const MmcConfig& cfg, MmcState start_state, Vec2 target,
                            int iterations) {
    check_config(cfg);
    if (iterations < 1) throw std::invalid_argument("solve_inverse: iterations must be >= 1");
    MovementTrace trace;
    trace.start = end_effector(start_state);
    trace.target = target;
    start_state.effector = target;
    start_state.clamp(Var::R);
    record(trace, start_state, cfg);
    trace.start_distance = trace.distances[0];
    for (int k = 0; k < iterations; ++k) {
        iterate(start_state, cfg);
        record(trace, start_state, cfg);
    }
    return trace;
}

Vec2 solve_forward(const MmcConfig& cfg, const std::array<double, 3>& segment_angles,
                   int iterations) {
    check_config(cfg);
    if (iterations < 1) throw std::invalid_argument("solve_forward: iterations must be >= 1");
    MmcState state = initial_state(cfg, segment_angles);
    state.clamp(Var::L1);
    state.clamp(Var::L2);
    state.clamp(Var::L3);
    for (int k = 0; k < iterations; ++k) iterate(state, cfg);
    return state.effector;
}

}  // namespace mmc
