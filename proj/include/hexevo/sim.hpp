#pragma once

// Simplified hexacopter plant for desk-scale benchmarking.
//
// Frame: north/east/up, positions and velocities in cm, angles in degrees
// (NED-style attitude: positive roll leans east, positive pitch noses up
// and accelerates south).  Dynamics are rigid-body with diagonal inertia,
// thrust linear in PWM, linear drag against the air mass, and the rig's
// constraints folded in: attitude/yaw tether clamps, soft flight-volume
// walls, and a hard floor.  Integration is semi-implicit Euler at 400 Hz.

#include <array>
#include <stdexcept>

#include "hexevo/rng.hpp"

namespace hexevo {

inline constexpr double kSimRate = 400.0;
inline constexpr double kSimDt = 1.0 / kSimRate;

using MotorCommands = std::array<double, 6>;

// Hex-X rotor ring, azimuths 30 + 60k degrees from body-forward toward
// body-right.  a/b/s are the roll/pitch/yaw mixer columns; the same
// arrays drive the torque model, so mixer and plant stay consistent.
// Each column sums to zero (pure collective produces no torque).
struct MotorLayout {
    std::array<double, 6> a;  // -sin(azimuth)
    std::array<double, 6> b;  // +cos(azimuth)
    std::array<double, 6> s;  // alternating spin signs
};
const MotorLayout& motor_layout();

struct VehicleParams {
    double mass_kg = 1.5;
    double arm_m = 0.25;
    double inertia_xx = 0.02;   // kg m^2
    double inertia_yy = 0.02;
    double inertia_zz = 0.035;
    double drag_linear = 0.12;   // N per m/s of airspeed
    double drag_angular = 0.02;  // N m per rad/s
    double yaw_torque_arm = 0.016;  // m; rotor reaction torque per N of thrust
    double gravity = 9.81;
    double pwm_low = 1000.0;
    double pwm_high = 2000.0;
    double tilt_limit_deg = 60.0;   // tether clamp on roll/pitch
    double yaw_limit_deg = 160.0;   // tether clamp around psi_ref
    double volume_n_cm = 30.0;      // soft wall half-extents and ceiling
    double volume_e_cm = 30.0;
    double ceiling_cm = 20.0;
    double wall_spring = 50.0;  // cm/s^2 restoring accel per cm past a wall

    // Minimum net climb acceleration (m/s^2) that breaks ground contact;
    // below it the gear stays seated on the floor.
    double ground_exit_accel = 0.05;

    // Thrust per PWM unit, calibrated so that all motors at the PWM
    // midpoint carry the vehicle's weight exactly.
    double thrust_coeff() const {
        return mass_kg * gravity / (6.0 * 0.5 * (pwm_high - pwm_low));
    }
    double hover_base() const { return 0.5 * (pwm_low + pwm_high); }
};

struct VehicleState {
    double p_n = 0.0, p_e = 0.0, h = 0.0;        // cm
    double v_n = 0.0, v_e = 0.0, v_h = 0.0;      // cm/s
    double phi = 0.0, theta = 0.0, psi = 0.0;    // deg
    double omega_p = 0.0, omega_q = 0.0, omega_r = 0.0;  // deg/s
    bool on_ground = true;
    double t = 0.0;       // s
    double psi_ref = 0.0; // tether neutral heading, deg
};

// Uniform horizontal wind field whose bearing sweeps +-swing_deg around
// the base bearing (compass-style, toward which the air moves).
struct WindModel {
    double speed_cms = 500.0;
    double base_bearing_deg = 0.0;
    double swing_deg = 60.0;
    double period_s = 10.0;
};
std::array<double, 2> wind_at(const WindModel& w, double t);  // {v_n, v_e} cm/s

struct SimDiverged : std::runtime_error {
    SimDiverged() : std::runtime_error("simulator state diverged (non-finite)") {}
};

// Advance one step.  Commands are clamped onto [pwm_low, pwm_high].
// While grounded the vehicle stays put until the net vertical thrust
// could climb at ground_exit_accel; touching the floor zeroes all
// velocities and rates.  Throws SimDiverged if the state leaves the
// realm of finite numbers.
void sim_step(VehicleState& s, const VehicleParams& p, const MotorCommands& cmds,
              const std::array<double, 2>& wind_cms, double dt);

// --- State estimation -----------------------------------------------------

struct SensorNoise {
    bool enabled = true;
    double attitude_std_deg = 0.02;  // roll/pitch
    double heading_std_deg = 0.3;
    double position_std_cm = 0.10;
    double height_std_cm = 0.10;
};

struct SensorEstimate {
    double p_n = 0.0, p_e = 0.0, h = 0.0;
    double v_n = 0.0, v_e = 0.0, v_h = 0.0;
    double phi = 0.0, theta = 0.0, psi = 0.0;
    double omega_p = 0.0, omega_q = 0.0, omega_r = 0.0;
    bool fresh_position = false;  // position/velocity channels updated this cycle
    bool fresh_height = false;    // height channel updated this cycle
};

// Multirate estimator.  Attitude refreshes every cycle (400 Hz) and the
// rates are differenced from consecutive attitude estimates; position
// refreshes every 7th cycle (~60 Hz) and height every 20th (20 Hz), each
// held between refreshes.  Velocities are least-squares slopes over the
// five most recent samples of their source channel, and read zero until
// a channel's window has filled.
class SensorModel {
public:
    explicit SensorModel(const SensorNoise& noise) : noise_(noise) {}

    // Call exactly once per control cycle, in order.
    SensorEstimate sample(const VehicleState& s, RngStream& rng);

private:
    struct Track {
        std::array<double, 5> t{};
        std::array<double, 5> x{};
        int count = 0;
        void push(double time, double value);
        double slope() const;
    };

    SensorNoise noise_;
    long cycle_ = 0;
    SensorEstimate held_;
    bool have_prev_att_ = false;
    double prev_phi_ = 0.0, prev_theta_ = 0.0, prev_psi_ = 0.0;
    Track track_n_, track_e_, track_h_;
};

// Verbatim copy of the true state into an estimate (test/oracle hook).
SensorEstimate perfect_estimate(const VehicleState& s);

}  // namespace hexevo
