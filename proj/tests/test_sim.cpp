// Plant model: hover balance, ground contact, tether clamps, soft walls,
// wind kinematics, the multirate estimator, and divergence detection.

#include <doctest.h>

#include <cmath>
#include <limits>

#include "hexevo/mathutil.hpp"
#include "hexevo/rng.hpp"
#include "hexevo/sim.hpp"

using namespace hexevo;

namespace {

MotorCommands all_at(double u) { return {u, u, u, u, u, u}; }

VehicleState airborne_at(double h_cm) {
    VehicleState s;
    s.on_ground = false;
    s.h = h_cm;
    return s;
}

}  // namespace

TEST_SUITE("sim") {

TEST_CASE("thrust coefficient balances weight at the PWM midpoint") {
    VehicleParams p;
    CHECK(p.hover_base() == 1500.0);
    // Six motors at midpoint throttle produce exactly one weight of thrust.
    const double thrust = 6.0 * p.thrust_coeff() * (p.hover_base() - p.pwm_low);
    CHECK(thrust == doctest::Approx(p.mass_kg * p.gravity).epsilon(1e-12));
}

TEST_CASE("grounded vehicle ignores sub-threshold thrust") {
    VehicleParams p;
    VehicleState s;  // on the ground at the origin
    // Hover-balance thrust gives zero net climb accel: stays seated.
    for (int i = 0; i < 400; ++i) sim_step(s, p, all_at(1500.0), {0.0, 0.0}, kSimDt);
    CHECK(s.on_ground);
    CHECK(s.h == 0.0);
    CHECK(s.v_h == 0.0);
    CHECK(s.p_n == 0.0);
    CHECK(s.t == doctest::Approx(1.0));

    // Even with wind blowing, a grounded vehicle does not slide.
    for (int i = 0; i < 400; ++i) sim_step(s, p, all_at(1500.0), {500.0, 0.0}, kSimDt);
    CHECK(s.on_ground);
    CHECK(s.p_n == 0.0);
    CHECK(s.v_n == 0.0);

    // Slightly above balance but below the exit threshold: still seated.
    VehicleState s2;
    sim_step(s2, p, all_at(1502.0), {0.0, 0.0}, kSimDt);
    CHECK(s2.on_ground);
    CHECK(s2.h == 0.0);
}

TEST_CASE("ground contact breaks once climb accel reaches the threshold") {
    VehicleParams p;  // ground_exit_accel = 0.05 m/s^2
    // Net climb accel at command u: 6*kt*(u-1000)/m - g.
    const double a_at_1503 =
        6.0 * p.thrust_coeff() * 503.0 / p.mass_kg - p.gravity;
    REQUIRE(a_at_1503 > p.ground_exit_accel);
    VehicleState s;
    sim_step(s, p, all_at(1503.0), {0.0, 0.0}, kSimDt);
    CHECK_FALSE(s.on_ground);
    CHECK(s.v_h > 0.0);
    CHECK(s.h > 0.0);
}

TEST_CASE("level hover at balance thrust is a fixed point of the airborne dynamics") {
    VehicleParams p;
    VehicleState s = airborne_at(10.0);
    for (int i = 0; i < 2000; ++i) sim_step(s, p, all_at(1500.0), {0.0, 0.0}, kSimDt);
    CHECK(s.h == doctest::Approx(10.0).epsilon(1e-9));
    CHECK(s.v_h == doctest::Approx(0.0));
    CHECK(s.p_n == 0.0);
    CHECK(s.phi == 0.0);
    CHECK_FALSE(s.on_ground);
}

TEST_CASE("wind accelerates an airborne vehicle toward zero airspeed") {
    VehicleParams p;
    VehicleState s = airborne_at(10.0);
    // One step: a_n = (drag_linear/mass) * wind = 0.08 * 50 cm/s^2.
    sim_step(s, p, all_at(1500.0), {50.0, 0.0}, kSimDt);
    const double kd = p.drag_linear / p.mass_kg;
    CHECK(s.v_n == doctest::Approx(kd * 50.0 * kSimDt).epsilon(1e-9));
    CHECK(s.v_e == doctest::Approx(0.0));

    // Long exposure: the drift carries it downwind until the soft wall
    // balances the wind force, parking it just past the north face.
    for (int i = 0; i < 40000; ++i) sim_step(s, p, all_at(1500.0), {50.0, 0.0}, kSimDt);
    CHECK(s.p_n > 29.0);
    CHECK(s.p_n < 31.5);
    CHECK(std::abs(s.v_n) < 5.0);
}

TEST_CASE("unpowered vehicle falls and lands dead") {
    VehicleParams p;
    VehicleState s = airborne_at(20.0);
    s.v_n = 30.0;  // some horizontal motion to be zeroed on touchdown
    // 20 cm free fall takes ~0.20 s; give it 0.3 s.
    for (int i = 0; i < 120; ++i) sim_step(s, p, all_at(p.pwm_low), {0.0, 0.0}, kSimDt);
    CHECK(s.on_ground);
    CHECK(s.h == 0.0);
    CHECK(s.v_h == 0.0);
    CHECK(s.v_n == 0.0);
    CHECK(s.omega_p == 0.0);
}

TEST_CASE("tether clamps roll and pitch at the tilt limit") {
    VehicleParams p;
    p.drag_angular = 0.0;  // keep the spin rate exactly constant
    VehicleState s = airborne_at(10.0);
    s.phi = 59.9;
    s.omega_p = 400.0;
    sim_step(s, p, all_at(1500.0), {0.0, 0.0}, kSimDt);
    // 59.9 + 400*0.0025 = 60.9 hits the 60 degree stop; outward rate dies.
    CHECK(s.phi == 60.0);
    CHECK(s.omega_p == 0.0);

    VehicleState s2 = airborne_at(10.0);
    s2.theta = -59.9;
    s2.omega_q = -400.0;
    sim_step(s2, p, all_at(1500.0), {0.0, 0.0}, kSimDt);
    CHECK(s2.theta == -60.0);
    CHECK(s2.omega_q == 0.0);

    // Inward motion is never clamped.
    VehicleState s3 = airborne_at(10.0);
    s3.phi = 59.9;
    s3.omega_p = -400.0;
    sim_step(s3, p, all_at(1500.0), {0.0, 0.0}, kSimDt);
    CHECK(s3.phi == doctest::Approx(58.9));
    CHECK(s3.omega_p == doctest::Approx(-400.0));
}

TEST_CASE("yaw tether is centred on the neutral heading") {
    VehicleParams p;
    p.drag_angular = 0.0;
    VehicleState s = airborne_at(10.0);
    s.psi_ref = 30.0;
    s.psi = 186.0;
    s.omega_r = 2000.0;
    sim_step(s, p, all_at(1500.0), {0.0, 0.0}, kSimDt);
    // 186 + 5 = 191 exceeds psi_ref + 160 = 190: clamped, spin killed.
    CHECK(s.psi == 190.0);
    CHECK(s.omega_r == 0.0);

    VehicleState s2 = airborne_at(10.0);
    s2.psi_ref = 30.0;
    s2.psi = -126.0;
    s2.omega_r = -2000.0;
    sim_step(s2, p, all_at(1500.0), {0.0, 0.0}, kSimDt);
    CHECK(s2.psi == -130.0);  // psi_ref - 160
    CHECK(s2.omega_r == 0.0);
}

TEST_CASE("soft walls push back proportionally to penetration") {
    VehicleParams p;
    SUBCASE("north wall") {
        VehicleState s = airborne_at(10.0);
        s.p_n = 35.0;  // 5 cm past the 30 cm half-extent
        sim_step(s, p, all_at(1500.0), {0.0, 0.0}, kSimDt);
        CHECK(s.v_n == doctest::Approx(-p.wall_spring * 5.0 * kSimDt).epsilon(1e-9));
    }
    SUBCASE("negative east wall") {
        VehicleState s = airborne_at(10.0);
        s.p_e = -33.0;
        sim_step(s, p, all_at(1500.0), {0.0, 0.0}, kSimDt);
        CHECK(s.v_e == doctest::Approx(p.wall_spring * 3.0 * kSimDt).epsilon(1e-9));
    }
    SUBCASE("ceiling") {
        VehicleState s = airborne_at(25.0);  // 5 cm above the 20 cm ceiling
        sim_step(s, p, all_at(1500.0), {0.0, 0.0}, kSimDt);
        CHECK(s.v_h == doctest::Approx(-p.wall_spring * 5.0 * kSimDt).epsilon(1e-9));
    }
    SUBCASE("inside the volume no wall force acts") {
        VehicleState s = airborne_at(10.0);
        s.p_n = 29.9;
        sim_step(s, p, all_at(1500.0), {0.0, 0.0}, kSimDt);
        CHECK(s.v_n == doctest::Approx(0.0));
    }
}

TEST_CASE("yaw torque follows the spin-sign column") {
    VehicleParams p;
    p.drag_angular = 0.0;
    VehicleState s = airborne_at(10.0);
    // +d_psi through the mixer: motors with s=+1 up, s=-1 down.
    MotorCommands cmds;
    const MotorLayout& m = motor_layout();
    for (int i = 0; i < 6; ++i)
        cmds[static_cast<std::size_t>(i)] = 1500.0 + m.s[static_cast<std::size_t>(i)] * 50.0;
    sim_step(s, p, cmds, {0.0, 0.0}, kSimDt);
    // tau_z = yaw_torque_arm * sum(s_i^2) * kt * 50 (signs square to one).
    const double tau = p.yaw_torque_arm * 6.0 * p.thrust_coeff() * 50.0;
    const double expect = rad2deg(tau / p.inertia_zz) * kSimDt;
    CHECK(s.omega_r == doctest::Approx(expect).epsilon(1e-9));
    // Total thrust is unchanged, so no net climb.
    CHECK(s.v_h == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("wind field sweeps its bearing sinusoidally") {
    WindModel w;
    w.speed_cms = 30.0;
    w.base_bearing_deg = 90.0;
    w.swing_deg = 35.0;
    w.period_s = 10.0;

    const auto at0 = wind_at(w, 0.0);
    CHECK(at0[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(at0[1] == doctest::Approx(30.0));

    // Quarter period: bearing = 90 + 35 = 125.
    const auto at_q = wind_at(w, 2.5);
    CHECK(at_q[0] == doctest::Approx(30.0 * std::cos(deg2rad(125.0))));
    CHECK(at_q[1] == doctest::Approx(30.0 * std::sin(deg2rad(125.0))));

    // Full period: back to the base bearing.
    const auto at_p = wind_at(w, 10.0);
    CHECK(at_p[0] == doctest::Approx(at0[0]).epsilon(1e-9));
    CHECK(at_p[1] == doctest::Approx(at0[1]).epsilon(1e-9));

    // Speed is preserved at all times.
    for (double t = 0.0; t < 10.0; t += 0.37) {
        const auto v = wind_at(w, t);
        CHECK(std::hypot(v[0], v[1]) == doctest::Approx(30.0).epsilon(1e-9));
    }
}

TEST_CASE("non-finite state is reported, not propagated") {
    VehicleParams p;
    VehicleState s = airborne_at(10.0);
    s.v_h = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(sim_step(s, p, all_at(1500.0), {0.0, 0.0}, kSimDt), SimDiverged);
}

TEST_CASE("estimator refresh cadence: attitude every cycle, position 1-in-7, height 1-in-20") {
    SensorNoise noise;
    noise.enabled = false;
    SensorModel model(noise);
    RngStream rng(1);
    VehicleState s;
    for (int cycle = 0; cycle < 141; ++cycle) {
        const SensorEstimate e = model.sample(s, rng);
        CHECK(e.fresh_position == (cycle % 7 == 0));
        CHECK(e.fresh_height == (cycle % 20 == 0));
    }
}

TEST_CASE("noise-off estimates pass the true state through at refresh instants") {
    SensorNoise noise;
    noise.enabled = false;
    SensorModel model(noise);
    RngStream rng(1);
    VehicleState s;
    s.p_n = 3.25;
    s.p_e = -1.5;
    s.h = 12.0;
    s.phi = 2.0;
    s.theta = -1.0;
    s.psi = 44.0;
    const SensorEstimate e = model.sample(s, rng);  // cycle 0: everything fresh
    CHECK(e.p_n == 3.25);
    CHECK(e.p_e == -1.5);
    CHECK(e.h == 12.0);
    CHECK(e.phi == 2.0);
    CHECK(e.theta == -1.0);
    CHECK(e.psi == 44.0);
    // First cycle has no attitude history: rates read zero.
    CHECK(e.omega_p == 0.0);
    CHECK(e.omega_r == 0.0);

    // Between refreshes the held position does not track the state.
    s.p_n = 99.0;
    const SensorEstimate e2 = model.sample(s, rng);  // cycle 1: held
    CHECK(e2.p_n == 3.25);
    CHECK_FALSE(e2.fresh_position);
}

TEST_CASE("estimator rates difference consecutive attitude samples") {
    SensorNoise noise;
    noise.enabled = false;
    SensorModel model(noise);
    RngStream rng(1);
    VehicleState s;
    s.phi = 1.0;
    model.sample(s, rng);
    s.phi = 1.5;
    const SensorEstimate e = model.sample(s, rng);
    CHECK(e.omega_p == doctest::Approx(0.5 / kSimDt).epsilon(1e-9));
}

TEST_CASE("estimated velocities hold zero until the slope window fills") {
    SensorNoise noise;
    noise.enabled = false;
    SensorModel model(noise);
    RngStream rng(1);
    VehicleState s;

    // Height climbs at exactly 50 cm/s.  Samples land every 20 cycles;
    // the fifth arrives on cycle 80.
    for (int cycle = 0; cycle <= 80; ++cycle) {
        s.h = 100.0 + 50.0 * (static_cast<double>(cycle) * kSimDt);
        s.p_n = 20.0 * (static_cast<double>(cycle) * kSimDt);
        const SensorEstimate e = model.sample(s, rng);
        if (cycle < 80) {
            CHECK(e.v_h == 0.0);
        } else {
            CHECK(e.v_h == doctest::Approx(50.0).epsilon(1e-9));
        }
        // Position window (every 7 cycles) fills at cycle 28.
        if (cycle < 28) {
            CHECK(e.v_n == 0.0);
        } else if (e.fresh_position) {
            CHECK(e.v_n == doctest::Approx(20.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("noisy estimates are deterministic given the stream") {
    SensorNoise noise;  // enabled by default
    REQUIRE(noise.enabled);
    VehicleState s;
    s.h = 10.0;
    SensorModel m1(noise), m2(noise);
    RngStream r1(7), r2(7);
    for (int i = 0; i < 50; ++i) {
        const SensorEstimate a = m1.sample(s, r1);
        const SensorEstimate b = m2.sample(s, r2);
        CHECK(a.phi == b.phi);
        CHECK(a.psi == b.psi);
        CHECK(a.h == b.h);
        CHECK(a.p_n == b.p_n);
    }
}

TEST_CASE("perfect estimate mirrors the state with all channels fresh") {
    VehicleState s;
    s.p_n = 1.0;
    s.v_e = -2.0;
    s.h = 14.0;
    s.psi = 80.0;
    s.omega_r = 5.0;
    const SensorEstimate e = perfect_estimate(s);
    CHECK(e.p_n == 1.0);
    CHECK(e.v_e == -2.0);
    CHECK(e.h == 14.0);
    CHECK(e.psi == 80.0);
    CHECK(e.omega_r == 5.0);
    CHECK(e.fresh_position);
    CHECK(e.fresh_height);
}

}  // TEST_SUITE
