#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mmc/mmc_core.hpp"

using namespace mmc;
using std::numbers::pi;

namespace {

MmcState stretched(const MmcConfig& cfg) { return initial_state(cfg, {0, 0, 0}); }

void check_close(Vec2 a, Vec2 b, double tol) {
    CHECK(std::abs(a.x - b.x) <= tol);
    CHECK(std::abs(a.y - b.y) <= tol);
}

}  // namespace

TEST_CASE("initial_state is geometrically consistent") {
    MmcConfig cfg;
    const MmcState s = stretched(cfg);
    check_close(s.seg[0], {1, 0}, 0.0);
    check_close(s.diag[0], {2, 0}, 0.0);
    check_close(s.effector, {3, 0}, 0.0);

    const MmcState bent = initial_state(cfg, {pi / 2, 0, -pi / 2});
    check_close(end_effector(bent), {1, 0}, 1e-12);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dist(0.0, 2 * pi);
    for (int k = 0; k < 100; ++k) {
        const MmcState st = initial_state(cfg, {dist(rng), dist(rng), dist(rng)});
        check_close(st.effector - st.seg[0] - st.seg[1] - st.seg[2], {0, 0}, 1e-12);
        check_close(st.diag[0], st.seg[0] + st.seg[1], 1e-12);
        check_close(st.diag[1], st.seg[1] + st.seg[2], 1e-12);
    }
}

TEST_CASE("linear_step hand oracle: stretched arm, R clamped to (0,3)") {
    MmcConfig cfg;  // d = 10
    MmcState s = stretched(cfg);
    s.effector = {0, 3};
    s.clamp(Var::R);
    linear_step(s, cfg);
    CHECK(s.proposal[0].x == 0.7);  // exact hand evaluation
    CHECK(s.proposal[0].y == 0.3);
    CHECK(s.effector.x == 0.0);  // clamp held
    CHECK(s.effector.y == 3.0);
}

TEST_CASE("linear_step fixed point on a consistent state") {
    MmcConfig cfg;
    MmcState s = initial_state(cfg, {0.3, 1.2, -0.4});
    s.effector = end_effector(s);
    s.clamp(Var::R);
    const MmcState before = s;
    linear_step(s, cfg);
    for (int i = 0; i < 3; ++i) check_close(s.proposal[i], before.seg[i], 1e-15);
    check_close(s.diag[0], before.diag[0], 1e-15);
    check_close(s.diag[1], before.diag[1], 1e-15);
    check_close(s.effector, before.effector, 0.0);
}

TEST_CASE("normalize_segment euclidean") {
    MmcConfig cfg;
    check_close(normalize_segment({3, 4}, 1.0, cfg, {1, 0}), {0.6, 0.8}, 1e-15);
    check_close(normalize_segment({0.6, 0.8}, 1.0, cfg, {1, 0}), {0.6, 0.8}, 1e-15);
    // degenerate input keeps the previous normalized value
    check_close(normalize_segment({0, 0}, 1.0, cfg, {0.6, 0.8}), {0.6, 0.8}, 0.0);
    check_close(normalize_segment({1e-12, 0}, 1.0, cfg, {0, 1}), {0, 1}, 0.0);
}

TEST_CASE("iterate hand oracle and normalization contract") {
    MmcConfig cfg;
    MmcState s = stretched(cfg);
    s.effector = {0, 3};
    s.clamp(Var::R);
    iterate(s, cfg);
    const double n = std::hypot(0.7, 0.3);
    check_close(s.seg[0], {0.7 / n, 0.3 / n}, 1e-15);
    for (int i = 0; i < 3; ++i)
        CHECK(length(s.seg[static_cast<std::size_t>(i)]) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("consistent state with R clamped at own end effector is a fixed point") {
    MmcConfig cfg;
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> dist(0.0, 2 * pi);
    for (int k = 0; k < 100; ++k) {
        MmcState s = initial_state(cfg, {dist(rng), dist(rng), dist(rng)});
        s.effector = end_effector(s);
        s.clamp(Var::R);
        const MmcState before = s;
        iterate(s, cfg);
        for (int i = 0; i < 3; ++i)
            check_close(s.seg[static_cast<std::size_t>(i)],
                        before.seg[static_cast<std::size_t>(i)], 1e-12);
        check_close(s.diag[0], before.diag[0], 1e-12);
        check_close(s.diag[1], before.diag[1], 1e-12);
    }
}

TEST_CASE("rotation equivariance of the euclidean iterate") {
    MmcConfig cfg;
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> dist(0.0, 2 * pi);
    for (int k = 0; k < 100; ++k) {
        MmcState s = initial_state(cfg, {dist(rng), dist(rng), dist(rng)});
        const Vec2 target = from_angle(dist(rng), 2.0);
        const double phi = dist(rng);

        MmcState plain = s;
        plain.effector = target;
        plain.clamp(Var::R);
        iterate(plain, cfg);

        MmcState rot = s;
        for (auto& v : rot.seg) v = rotated(v, phi);
        for (auto& v : rot.diag) v = rotated(v, phi);
        rot.effector = rotated(target, phi);
        rot.clamp(Var::R);
        iterate(rot, cfg);

        for (int i = 0; i < 3; ++i)
            check_close(rot.seg[static_cast<std::size_t>(i)],
                        rotated(plain.seg[static_cast<std::size_t>(i)], phi), 1e-9);
        check_close(rot.effector, rotated(plain.effector, phi), 1e-9);
    }
}

TEST_CASE("solve_inverse") {
    MmcConfig cfg;

    SUBCASE("target at the current end effector leaves the state untouched") {
        const MmcState s = initial_state(cfg, {0.4, -0.2, 0.9});
        const MovementTrace t = solve_inverse(cfg, s, end_effector(s), 10);
        for (const auto& st : t.states)
            check_close(end_effector(st), end_effector(s), 1e-12);
    }

    SUBCASE("stretched to (0,3) converges") {
        const MovementTrace t = solve_inverse(cfg, stretched(cfg), {0, 3}, 100);
        CHECK(t.distances.back() / t.start_distance <= 0.05);
        CHECK(t.distances[100] < t.distances[10]);
    }

    SUBCASE("unreachable target plateaus at the workspace boundary") {
        const MovementTrace t = solve_inverse(cfg, stretched(cfg), {0, 5}, 300);
        CHECK(t.distances.back() == doctest::Approx(2.0).epsilon(0.05));
        // arm points toward the target
        const Vec2 tip = end_effector(t.states.back());
        CHECK(tip.y == doctest::Approx(3.0).epsilon(0.05));
        CHECK(std::abs(tip.x) < 0.2);
    }
}

TEST_CASE("solve_forward matches the analytic segment sum") {
    MmcConfig cfg;
    check_close(solve_forward(cfg, {0, 0, 0}, 100), {3, 0}, 1e-9);
    check_close(solve_forward(cfg, {pi / 2, 0, -pi / 2}, 100), {1, 0}, 1e-9);

    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> dist(0.0, 2 * pi);
    for (int k = 0; k < 50; ++k) {
        const std::array<double, 3> ang{dist(rng), dist(rng), dist(rng)};
        const Vec2 expected =
            from_angle(ang[0], 1) + from_angle(ang[1], 1) + from_angle(ang[2], 1);
        check_close(solve_forward(cfg, ang, 100), expected, 1e-6);
    }
}

TEST_CASE("end_effector vs network variable R") {
    MmcConfig cfg;
    const MmcState s = stretched(cfg);
    check_close(end_effector(s), {3, 0}, 0.0);
    check_close(end_effector(s), s.effector, 1e-12);

    // during a transient the arm tip lags the injected R; the gap shrinks
    MovementTrace t = solve_inverse(cfg, stretched(cfg), {0, 3}, 100);
    const double early = distance(end_effector(t.states[1]), t.states[1].effector);
    const double late = distance(end_effector(t.states[100]), t.states[100].effector);
    CHECK(late < early);
}

TEST_CASE("invalid configs are rejected") {
    MmcConfig bad;
    bad.damping = 2.0;
    CHECK_THROWS(initial_state(bad, {0, 0, 0}));
    MmcConfig neg;
    neg.segment_lengths = {1, -1, 1};
    CHECK_THROWS(initial_state(neg, {0, 0, 0}));
}
