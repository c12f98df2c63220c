#include <doctest.h>

#include <cmath>
#include <limits>

#include "lanesafe/vehicle_model.hpp"

using namespace lanesafe;

namespace {

// Constant-input unicycle has a closed-form circular-arc solution; the
// independent oracle for the integrator tests.
VehicleState arc_solution(const VehicleState& s, const ControlInput& u, double t) {
    VehicleState out = s;
    if (u.omega == 0.0) {
        out.x += u.v * std::cos(s.psi) * t;
        out.y += u.v * std::sin(s.psi) * t;
    } else {
        const double r = u.v / u.omega;
        out.x += r * (std::sin(s.psi + u.omega * t) - std::sin(s.psi));
        out.y -= r * (std::cos(s.psi + u.omega * t) - std::cos(s.psi));
        out.psi += u.omega * t;
    }
    out.v_applied = u.v;
    out.omega_applied = u.omega;
    return out;
}

}  // namespace

TEST_CASE("dynamics matches the unicycle equations") {
    auto d = dynamics({0, 0, 0.0, 0, 0}, {1.0, 0.2});
    CHECK(d.dx == doctest::Approx(1.0));
    CHECK(d.dy == doctest::Approx(0.0));
    CHECK(d.dpsi == doctest::Approx(0.2));

    d = dynamics({0, 0, M_PI / 2.0, 0, 0}, {2.0, 0.0});
    CHECK(d.dx == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(d.dy == doctest::Approx(2.0));

    d = dynamics({0, 0, M_PI / 4.0, 0, 0}, {std::sqrt(2.0), 0.0});
    CHECK(d.dx == doctest::Approx(1.0));
    CHECK(d.dy == doctest::Approx(1.0));
    CHECK(d.dpsi == doctest::Approx(0.0));
}

TEST_CASE("straight-line step is exact") {
    const VehicleState s{0, 0, 0, 0, 0};
    const VehicleState out = step(s, {10.0, 0.0}, 0.1);
    CHECK(out.x == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(out.y == 0.0);
    CHECK(out.psi == 0.0);
    CHECK(out.v_applied == 10.0);
}

TEST_CASE("zero speed is a fixed point") {
    const VehicleState s{5.0, 3.0, 0.2, 1.0, 0.1};
    const VehicleState out = step(s, {0.0, 0.0}, 1.0);
    CHECK(out.x == s.x);
    CHECK(out.y == s.y);
    CHECK(out.psi == s.psi);
}

TEST_CASE("arc step matches the closed form") {
    const VehicleState s{0, 0, 0, 0, 0};
    const VehicleState out = step(s, {10.0, 0.1}, 0.1);
    CHECK(out.x == doctest::Approx(0.999983333416667).epsilon(1e-9));
    CHECK(out.y == doctest::Approx(0.004999958333474).epsilon(1e-9));
    CHECK(out.psi == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("arc accuracy over a grid of turn rates") {
    // One RK4 step: relative error <= 1e-8 for |omega*dt| <= 0.05 and
    // <= 1e-7 up to 0.1; the Simpson quadrature bound (w*dt)^4/2880 reaches
    // 3.5e-8 at the top of that range.
    const VehicleState s{2.0, -1.0, 0.3, 0, 0};
    for (double v : {1.0, 8.0, 25.0}) {
        for (double omega_dt : {0.002, 0.01, 0.05, 0.08, 0.1}) {
            const double dt = 0.1;
            const double omega = omega_dt / dt;
            const VehicleState got = step(s, {v, omega}, dt);
            const VehicleState want = arc_solution(s, {v, omega}, dt);
            const double scale = std::max(1.0, v * dt);
            const double err = std::hypot(got.x - want.x, got.y - want.y) / scale;
            if (omega_dt <= 0.05) {
                CHECK(err <= 1e-8);
            } else {
                CHECK(err <= 1e-7);
            }
            CHECK(got.psi == doctest::Approx(want.psi).epsilon(1e-12));
        }
    }
}

TEST_CASE("step is deterministic") {
    const VehicleState s{1.0, 2.0, 0.1, 3.0, 0.0};
    const ControlInput u{12.345, -0.2345};
    const VehicleState a = step(s, u, 0.01);
    const VehicleState b = step(s, u, 0.01);
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
    CHECK(a.psi == b.psi);
}

TEST_CASE("step rejects bad inputs") {
    const VehicleState s{0, 0, 0, 0, 0};
    CHECK_THROWS_AS(step(s, {1.0, 0.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(step(s, {1.0, 0.0}, -0.1), std::invalid_argument);
    VehicleState bad = s;
    bad.x = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(step(bad, {1.0, 0.0}, 0.1), std::invalid_argument);
}
