#pragma once

#include "mmc/mmc_core.hpp"

namespace mmc {

struct DynConfig {
    double velocity_damping = 5.0;  // must be > 1
    double velocity_decay = 0.92;   // in (0, 1]; 1 recovers the prior formulation
};

// Kinematic state plus explicit segment velocities (length units per iteration).
struct DynState {
    MmcState base;
    std::array<Vec2, 3> velocity{};      // v1..v3
    std::array<Vec2, 3> dyn_proposal{};  // pre-normalization dynamic proposals
};

DynState initial_dyn_state(const MmcConfig& cfg, const std::array<double, 3>& segment_angles);

// v' = (1/d_vel) * (proposal - current) + decay * ((d_vel - 1)/d_vel) * v
Vec2 velocity_update(Vec2 v, Vec2 proposal, Vec2 current, const DynConfig& cfg);

Vec2 position_update(Vec2 current, Vec2 v);

// Full dynamic step: linear step, velocity update, position update, then
// normalization of the moved segments. Clamped segments are held with zero
// velocity.
void dynamic_iterate(DynState& state, const MmcConfig& cfg_mmc, const DynConfig& cfg_dyn);

MovementTrace solve_inverse_dynamic(const MmcConfig& cfg_mmc, const DynConfig& cfg_dyn,
                                    DynState start_state, Vec2 target, int iterations);

}  // namespace mmc
