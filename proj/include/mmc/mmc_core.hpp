#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "mmc/geom.hpp"
#include "mmc/mlp.hpp"

namespace mmc {

// Variables of the recurrent network that can be clamped from outside.
enum class Var : std::uint8_t { R = 0, L1 = 1, L2 = 2, L3 = 3 };

struct MmcConfig {
    double damping = 10.0;  // must be > 2 so the self weight (d-2)/d stays positive
    std::array<double, 3> segment_lengths{1.0, 1.0, 1.0};
    const MlpModel* norm_model = nullptr;  // nullptr: Euclidean normalization
    double zero_length_epsilon = 1e-9;

    bool neural() const { return norm_model != nullptr; }
};

// Full activation state of the recurrent network. Two structurally identical
// scalar networks (one per coordinate) share this container as Vec2 entries.
struct MmcState {
    std::array<Vec2, 3> seg;       // L1..L3, normalized segment vectors
    std::array<Vec2, 3> proposal;  // buffered post-integration proposals
    std::array<Vec2, 2> diag;      // D1, D2
    Vec2 effector;                 // network variable R
    std::uint8_t clamps = 0;

    bool clamped(Var v) const { return clamps & (1u << static_cast<unsigned>(v)); }
    void clamp(Var v) { clamps |= static_cast<std::uint8_t>(1u << static_cast<unsigned>(v)); }
    void unclamp_all() { clamps = 0; }
};

// Per-iteration record of one reaching movement.
struct MovementTrace {
    Vec2 start;   // end effector at iteration 0
    Vec2 target;
    std::vector<MmcState> states;    // states[k] = state after k iterations
    std::vector<double> distances;   // end-effector-to-target, raw
    double start_distance = 0.0;
    double max_segment_drift = 0.0;  // max |length(Li) - target length| seen
};

MmcState initial_state(const MmcConfig& cfg, const std::array<double, 3>& segment_angles);

// One damped multiple-computation step from the state at time t. Segment
// proposals land in `proposal`; D1, D2, R are updated in place. Clamped
// variables are held.
void linear_step(MmcState& state, const MmcConfig& cfg);

// Euclidean mode scales v onto the target length; neural mode runs the
// normalization model. Inputs below zero_length_epsilon keep `previous`.
Vec2 normalize_segment(Vec2 v, double target_len, const MmcConfig& cfg, Vec2 previous);

// Full kinematic update: linear step, then each non-clamped segment is
// normalized from its proposal.
void iterate(MmcState& state, const MmcConfig& cfg);

Vec2 end_effector(const MmcState& state);

MovementTrace solve_inverse(const MmcConfig& cfg, MmcState start_state, Vec2 target,
                            int iterations);

Vec2 solve_forward(const MmcConfig& cfg, const std::array<double, 3>& segment_angles,
                   int iterations);

}  // namespace mmc
