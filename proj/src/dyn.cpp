#include "mmc/dyn.hpp"

#include <cmath>
#include <stdexcept>

namespace mmc {

namespace {

void check_config(const DynConfig& cfg) {
    if (cfg.velocity_damping <= 1.0)
        throw std::invalid_argument("DynConfig: velocity_damping must be > 1");
    if (cfg.velocity_decay <= 0.0 || cfg.velocity_decay > 1.0)
        throw std::invalid_argument("DynConfig: velocity_decay must be in (0, 1]");
}

}  // namespace

DynState initial_dyn_state(const MmcConfig& cfg, const std::array<double, 3>& segment_angles) {
    DynState s;
    s.base = initial_state(cfg, segment_angles);
    s.dyn_proposal = s.base.seg;
    return s;
}

Vec2 velocity_update(Vec2 v, Vec2 proposal, Vec2 current, const DynConfig& cfg) {
    const double dv = cfg.velocity_damping;
    const double retain = cfg.velocity_decay * ((dv - 1.0) / dv);
    return (proposal - current) / dv + retain * v;
}

Vec2 position_update(Vec2 current, Vec2 v) { return current + v; }

void dynamic_iterate(DynState& state, const MmcConfig& cfg_mmc, const DynConfig& cfg_dyn) {
    check_config(cfg_dyn);
    linear_step(state.base, cfg_mmc);
    for (std::size_t i = 0; i < 3; ++i) {
        if (state.base.clamped(static_cast<Var>(i + 1))) {
            state.velocity[i] = {0.0, 0.0};
            state.dyn_proposal[i] = state.base.seg[i];
            continue;
        }
        state.velocity[i] = velocity_update(state.velocity[i], state.base.proposal[i],
                                            state.base.seg[i], cfg_dyn);
        state.dyn_proposal[i] = position_update(state.base.seg[i], state.velocity[i]);
        state.base.seg[i] = normalize_segment(state.dyn_proposal[i],
                                              cfg_mmc.segment_lengths[i], cfg_mmc,
                                              state.base.seg[i]);
    }
}

MovementTrace solve_inverse_dynamic(const MmcConfig& cfg_mmc, const DynConfig& cfg_dyn,
                                    DynState start_state, Vec2 target, int iterations) {
    if (iterations < 1)
        throw std::invalid_argument("solve_inverse_dynamic: iterations must be >= 1");
    MovementTrace trace;
    trace.start = end_effector(start_state.base);
    trace.target = target;
    start_state.base.effector = target;
    start_state.base.clamp(Var::R);

    auto record = [&](const MmcState& s) {
        trace.states.push_back(s);
        trace.distances.push_back(distance(end_effector(s), target));
        for (std::size_t i = 0; i < 3; ++i) {
            const double drift = std::abs(length(s.seg[i]) - cfg_mmc.segment_lengths[i]);
            if (drift > trace.max_segment_drift) trace.max_segment_drift = drift;
        }
    };

    record(start_state.base);
    trace.start_distance = trace.distances[0];
    for (int k = 0; k < iterations; ++k) {
        dynamic_iterate(start_state, cfg_mmc, cfg_dyn);
        record(start_state.base);
    }
    return trace;
}

}  // namespace mmc
