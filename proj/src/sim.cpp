#include "hexevo/sim.hpp"

#include <cmath>

#include "hexevo/mathutil.hpp"

namespace hexevo {

const MotorLayout& motor_layout() {
    static const MotorLayout layout = [] {
        const double c = std::sqrt(3.0) / 2.0;
        MotorLayout m;
        m.a = {-0.5, -1.0, -0.5, 0.5, 1.0, 0.5};
        m.b = {c, 0.0, -c, -c, 0.0, c};
        m.s = {1.0, -1.0, 1.0, -1.0, 1.0, -1.0};
        return m;
    }();
    return layout;
}

std::array<double, 2> wind_at(const WindModel& w, double t) {
    const double bearing =
        w.base_bearing_deg + w.swing_deg * std::sin(2.0 * kPi * t / w.period_s);
    return {w.speed_cms * std::cos(deg2rad(bearing)),
            w.speed_cms * std::sin(deg2rad(bearing))};
}

void sim_step(VehicleState& s, const VehicleParams& p, const MotorCommands& cmds,
              const std::array<double, 2>& wind_cms, double dt) {
    const MotorLayout& m = motor_layout();
    const double kt = p.thrust_coeff();

    double thrust = 0.0;
    std::array<double, 6> tm{};
    for (int i = 0; i < 6; ++i) {
        const double u = std::clamp(cmds[static_cast<std::size_t>(i)], p.pwm_low, p.pwm_high);
        tm[static_cast<std::size_t>(i)] = kt * (u - p.pwm_low);
        thrust += tm[static_cast<std::size_t>(i)];
    }

    const double a_up_hover = thrust / p.mass_kg - p.gravity;  // m/s^2, level attitude
    if (s.on_ground && a_up_hover < p.ground_exit_accel) {
        s.t += dt;
        return;
    }
    s.on_ground = false;

    // Moments from the rotor ring plus linear rotational damping.
    double tau_x = 0.0, tau_y = 0.0, tau_z = 0.0;
    for (int i = 0; i < 6; ++i) {
        tau_x += p.arm_m * m.a[static_cast<std::size_t>(i)] * tm[static_cast<std::size_t>(i)];
        tau_y += p.arm_m * m.b[static_cast<std::size_t>(i)] * tm[static_cast<std::size_t>(i)];
        tau_z += p.yaw_torque_arm * m.s[static_cast<std::size_t>(i)] * tm[static_cast<std::size_t>(i)];
    }
    const double alpha_p = rad2deg((tau_x - p.drag_angular * deg2rad(s.omega_p)) / p.inertia_xx);
    const double alpha_q = rad2deg((tau_y - p.drag_angular * deg2rad(s.omega_q)) / p.inertia_yy);
    const double alpha_r = rad2deg((tau_z - p.drag_angular * deg2rad(s.omega_r)) / p.inertia_zz);
    s.omega_p += alpha_p * dt;
    s.omega_q += alpha_q * dt;
    s.omega_r += alpha_r * dt;
    s.phi += s.omega_p * dt;
    s.theta += s.omega_q * dt;
    s.psi += s.omega_r * dt;

    // Tether: hard attitude clamp, yaw held near the neutral heading.
    if (s.phi > p.tilt_limit_deg) { s.phi = p.tilt_limit_deg; s.omega_p = std::min(s.omega_p, 0.0); }
    if (s.phi < -p.tilt_limit_deg) { s.phi = -p.tilt_limit_deg; s.omega_p = std::max(s.omega_p, 0.0); }
    if (s.theta > p.tilt_limit_deg) { s.theta = p.tilt_limit_deg; s.omega_q = std::min(s.omega_q, 0.0); }
    if (s.theta < -p.tilt_limit_deg) { s.theta = -p.tilt_limit_deg; s.omega_q = std::max(s.omega_q, 0.0); }
    if (s.psi - s.psi_ref > p.yaw_limit_deg) {
        s.psi = s.psi_ref + p.yaw_limit_deg;
        s.omega_r = std::min(s.omega_r, 0.0);
    }
    if (s.psi - s.psi_ref < -p.yaw_limit_deg) {
        s.psi = s.psi_ref - p.yaw_limit_deg;
        s.omega_r = std::max(s.omega_r, 0.0);
    }

    // Thrust direction from the updated attitude.
    const double sph = std::sin(deg2rad(s.phi)), cph = std::cos(deg2rad(s.phi));
    const double sth = std::sin(deg2rad(s.theta)), cth = std::cos(deg2rad(s.theta));
    const double sps = std::sin(deg2rad(s.psi)), cps = std::cos(deg2rad(s.psi));
    const double tm_acc = thrust / p.mass_kg;  // m/s^2

    double a_n = -tm_acc * (sth * cph * cps + sph * sps);
    double a_e = -tm_acc * (sth * cph * sps - sph * cps);
    double a_up = tm_acc * cth * cph - p.gravity;

    // Airspeed drag (m/s^2), then everything in cm/s^2.
    const double kd = p.drag_linear / p.mass_kg;
    a_n -= kd * (s.v_n - wind_cms[0]) / 100.0;
    a_e -= kd * (s.v_e - wind_cms[1]) / 100.0;
    a_up -= kd * s.v_h / 100.0;
    a_n *= 100.0;
    a_e *= 100.0;
    a_up *= 100.0;

    // Soft flight-volume walls.
    if (s.p_n > p.volume_n_cm) a_n -= p.wall_spring * (s.p_n - p.volume_n_cm);
    if (s.p_n < -p.volume_n_cm) a_n -= p.wall_spring * (s.p_n + p.volume_n_cm);
    if (s.p_e > p.volume_e_cm) a_e -= p.wall_spring * (s.p_e - p.volume_e_cm);
    if (s.p_e < -p.volume_e_cm) a_e -= p.wall_spring * (s.p_e + p.volume_e_cm);
    if (s.h > p.ceiling_cm) a_up -= p.wall_spring * (s.h - p.ceiling_cm);

    s.v_n += a_n * dt;
    s.v_e += a_e * dt;
    s.v_h += a_up * dt;
    s.p_n += s.v_n * dt;
    s.p_e += s.v_e * dt;
    s.h += s.v_h * dt;

    if (s.h <= 0.0) {
        s.h = 0.0;
        s.v_n = s.v_e = s.v_h = 0.0;
        s.omega_p = s.omega_q = s.omega_r = 0.0;
        s.on_ground = true;
    }
    s.t += dt;

    const bool finite = std::isfinite(s.p_n) && std::isfinite(s.p_e) && std::isfinite(s.h) &&
                        std::isfinite(s.v_n) && std::isfinite(s.v_e) && std::isfinite(s.v_h) &&
                        std::isfinite(s.phi) && std::isfinite(s.theta) && std::isfinite(s.psi) &&
                        std::isfinite(s.omega_p) && std::isfinite(s.omega_q) &&
                        std::isfinite(s.omega_r);
    if (!finite)
        throw SimDiverged();
}

void SensorModel::Track::push(double time, double value) {
    if (count < 5) {
        t[static_cast<std::size_t>(count)] = time;
        x[static_cast<std::size_t>(count)] = value;
        ++count;
        return;
    }
    for (int i = 0; i < 4; ++i) {
        t[static_cast<std::size_t>(i)] = t[static_cast<std::size_t>(i + 1)];
        x[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i + 1)];
    }
    t[4] = time;
    x[4] = value;
}

double SensorModel::Track::slope() const {
    // Hold zero until the window fills; short-baseline slopes are noise.
    if (count < 5)
        return 0.0;
    double mt = 0.0, mx = 0.0;
    for (int i = 0; i < count; ++i) {
        mt += t[static_cast<std::size_t>(i)];
        mx += x[static_cast<std::size_t>(i)];
    }
    mt /= count;
    mx /= count;
    double num = 0.0, den = 0.0;
    for (int i = 0; i < count; ++i) {
        const double dt = t[static_cast<std::size_t>(i)] - mt;
        num += dt * (x[static_cast<std::size_t>(i)] - mx);
        den += dt * dt;
    }
    return den > 0.0 ? num / den : 0.0;
}

SensorEstimate SensorModel::sample(const VehicleState& s, RngStream& rng) {
    const double time = static_cast<double>(cycle_) * kSimDt;
    SensorEstimate& e = held_;
    e.fresh_position = false;
    e.fresh_height = false;

    // Attitude refreshes every cycle; rates are first differences of the
    // attitude estimates themselves.
    const double phi = s.phi + (noise_.enabled ? noise_.attitude_std_deg * rng.gauss() : 0.0);
    const double theta = s.theta + (noise_.enabled ? noise_.attitude_std_deg * rng.gauss() : 0.0);
    const double psi = s.psi + (noise_.enabled ? noise_.heading_std_deg * rng.gauss() : 0.0);
    if (have_prev_att_) {
        e.omega_p = (phi - prev_phi_) / kSimDt;
        e.omega_q = (theta - prev_theta_) / kSimDt;
        e.omega_r = (psi - prev_psi_) / kSimDt;
    } else {
        e.omega_p = e.omega_q = e.omega_r = 0.0;
    }
    prev_phi_ = phi;
    prev_theta_ = theta;
    prev_psi_ = psi;
    have_prev_att_ = true;
    e.phi = phi;
    e.theta = theta;
    e.psi = psi;

    if (cycle_ % 20 == 0) {
        e.h = s.h + (noise_.enabled ? noise_.height_std_cm * rng.gauss() : 0.0);
        track_h_.push(time, e.h);
        e.v_h = track_h_.slope();
        e.fresh_height = true;
    }
    if (cycle_ % 7 == 0) {
        e.p_n = s.p_n + (noise_.enabled ? noise_.position_std_cm * rng.gauss() : 0.0);
        e.p_e = s.p_e + (noise_.enabled ? noise_.position_std_cm * rng.gauss() : 0.0);
        track_n_.push(time, e.p_n);
        track_e_.push(time, e.p_e);
        e.v_n = track_n_.slope();
        e.v_e = track_e_.slope();
        e.fresh_position = true;
    }

    ++cycle_;
    return e;
}

SensorEstimate perfect_estimate(const VehicleState& s) {
    SensorEstimate e;
    e.p_n = s.p_n;
    e.p_e = s.p_e;
    e.h = s.h;
    e.v_n = s.v_n;
    e.v_e = s.v_e;
    e.v_h = s.v_h;
    e.phi = s.phi;
    e.theta = s.theta;
    e.psi = s.psi;
    e.omega_p = s.omega_p;
    e.omega_q = s.omega_q;
    e.omega_r = s.omega_r;
    e.fresh_position = true;
    e.fresh_height = true;
    return e;
}

}  // namespace hexevo
