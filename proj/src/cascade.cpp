#include "hexevo/cascade.hpp"

#include <cmath>
#include <stdexcept>

#include "hexevo/mathutil.hpp"

namespace hexevo {

std::vector<GeneSpec> hover_gene_specs(const ControlLimits& lim, double cmd_range) {
    const double att = cmd_range / lim.attitude_err_deg;
    const double hgt = cmd_range / lim.height_err_cm;
    const double pos = lim.tilt_cmd_deg / lim.position_err_cm;
    std::vector<GeneSpec> specs;
    specs.reserve(kGenomeSize);
    const double ub[6] = {att, att, att, hgt, pos, pos};
    for (int ch = 0; ch < 6; ++ch)
        for (int k = 0; k < 3; ++k)
            specs.push_back(GeneSpec{0.0, 10.0 * ub[ch], 0.0, ub[ch]});
    return specs;
}

MotorCommands mix(double d_phi, double d_theta, double d_psi, double d_t,
                  double hover_base, double pwm_low, double pwm_high) {
    const MotorLayout& m = motor_layout();
    MotorCommands cmds{};
    for (int i = 0; i < 6; ++i) {
        const double raw = hover_base + d_t + m.a[static_cast<std::size_t>(i)] * d_phi +
                           m.b[static_cast<std::size_t>(i)] * d_theta +
                           m.s[static_cast<std::size_t>(i)] * d_psi;
        cmds[static_cast<std::size_t>(i)] = std::clamp(raw, pwm_low, pwm_high);
    }
    return cmds;
}

CascadeController::CascadeController(const Genome& genome, const ControlLimits& lim,
                                     double hover_base, double pwm_low, double pwm_high)
    : lim_(lim), hover_base_(hover_base), pwm_low_(pwm_low), pwm_high_(pwm_high) {
    if (genome.size() != kGenomeSize)
        throw std::invalid_argument("controller genome must have 18 gains");
    for (int ch = 0; ch < 6; ++ch)
        gains_[static_cast<std::size_t>(ch)] =
            PidGains{genome[static_cast<std::size_t>(3 * ch)],
                     genome[static_cast<std::size_t>(3 * ch + 1)],
                     genome[static_cast<std::size_t>(3 * ch + 2)]};
}

MotorCommands CascadeController::step(const SensorEstimate& est, const Setpoint& sp, double dt) {
    since_pos_ += dt;
    since_h_ += dt;

    if (est.fresh_position) {
        // World position errors into the yaw frame: forward drives pitch
        // (nose down to move forward), rightward drives roll.
        const double e_n = sp.p_n - est.p_n;
        const double e_e = sp.p_e - est.p_e;
        const double cy = std::cos(deg2rad(est.psi));
        const double sy = std::sin(deg2rad(est.psi));
        const double e_fwd = limit_error(cy * e_n + sy * e_e, lim_.position_err_cm);
        const double e_right = limit_error(-sy * e_n + cy * e_e, lim_.position_err_cm);
        const double cap = lim_.position_err_cm * lim_.windup_s;
        const double out_n = pid_step(pids_[kChNorth], gains_[kChNorth], e_fwd, since_pos_, cap);
        const double out_e = pid_step(pids_[kChEast], gains_[kChEast], e_right, since_pos_, cap);
        theta_sp_ = -clamp_abs(out_n, lim_.tilt_cmd_deg);
        phi_sp_ = clamp_abs(out_e, lim_.tilt_cmd_deg);
        since_pos_ = 0.0;
    }

    if (est.fresh_height) {
        const double e_h = limit_error(sp.h - est.h, lim_.height_err_cm);
        const double cap = lim_.height_err_cm * lim_.windup_s;
        d_t_ = pid_step(pids_[kChHeight], gains_[kChHeight], e_h, since_h_, cap);
        since_h_ = 0.0;
    }

    const double att_cap = lim_.attitude_err_deg * lim_.windup_s;
    const double e_phi = limit_error(phi_sp_ - est.phi, lim_.attitude_err_deg);
    const double e_theta = limit_error(theta_sp_ - est.theta, lim_.attitude_err_deg);
    const double e_psi = limit_error(wrap_angle(sp.psi - est.psi), lim_.attitude_err_deg);
    const double d_phi = pid_step(pids_[kChRoll], gains_[kChRoll], e_phi, dt, att_cap);
    const double d_theta = pid_step(pids_[kChPitch], gains_[kChPitch], e_theta, dt, att_cap);
    const double d_psi = pid_step(pids_[kChYaw], gains_[kChYaw], e_psi, dt, att_cap);

    return mix(d_phi, d_theta, d_psi, d_t_, hover_base_, pwm_low_, pwm_high_);
}

}  // namespace hexevo
