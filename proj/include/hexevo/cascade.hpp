#pragma once

// Two-loop cascaded PID flight controller.
//
// Outer loop: position errors, rotated into the vehicle's yaw frame,
// produce roll/pitch setpoints (clamped).  Inner loop: attitude and
// height PIDs produce mixer deltas.  Every error is clamped before its
// PID consumes it, and each PID steps at the refresh cadence of the
// estimate channel that feeds it.

#include <vector>

#include "hexevo/de.hpp"
#include "hexevo/pid.hpp"
#include "hexevo/sim.hpp"

namespace hexevo {

struct Setpoint {
    double p_n = 0.0, p_e = 0.0;  // cm
    double h = 0.0;               // cm
    double phi = 0.0, theta = 0.0, psi = 0.0;  // deg
};

struct ControlLimits {
    double attitude_err_deg = 15.0;
    double height_err_cm = 10.0;
    double position_err_cm = 15.0;
    double tilt_cmd_deg = 15.0;  // clamp on the position loop's output
    double windup_s = 2.0;       // integral cap = error limit x this
};

// Genome layout: six (kp, ki, kd) triples in controller order
// roll, pitch, yaw, height, north, east.
inline constexpr int kGenomeSize = 18;
enum GenomeChannel { kChRoll = 0, kChPitch = 1, kChYaw = 2, kChHeight = 3, kChNorth = 4, kChEast = 5 };

// Per-gene domains for the hover task: initial gains are uniform on
// (0, cmd_range / error_limit] per channel, and recombination may explore
// up to ten times that bound.
std::vector<GeneSpec> hover_gene_specs(const ControlLimits& lim, double cmd_range = 500.0);

// Saturating hex mixer around the hover base command.
MotorCommands mix(double d_phi, double d_theta, double d_psi, double d_t,
                  double hover_base, double pwm_low, double pwm_high);

inline bool any_at_limit(const MotorCommands& cmds, double pwm_low, double pwm_high) {
    for (double u : cmds)
        if (u <= pwm_low || u >= pwm_high)
            return true;
    return false;
}

inline bool any_at_upper_limit(const MotorCommands& cmds, double pwm_high) {
    for (double u : cmds)
        if (u >= pwm_high)
            return true;
    return false;
}

class CascadeController {
public:
    CascadeController(const Genome& genome, const ControlLimits& lim, double hover_base,
                      double pwm_low = 1000.0, double pwm_high = 2000.0);

    // One 400 Hz control cycle.  The setpoint's phi/theta are commanded
    // by the outer loop, not the caller; sp.phi/sp.theta are ignored.
    MotorCommands step(const SensorEstimate& est, const Setpoint& sp, double dt);

    double roll_setpoint() const { return phi_sp_; }
    double pitch_setpoint() const { return theta_sp_; }

private:
    std::array<PidGains, 6> gains_{};
    std::array<PidState, 6> pids_{};
    ControlLimits lim_;
    double hover_base_;
    double pwm_low_, pwm_high_;
    double phi_sp_ = 0.0, theta_sp_ = 0.0;  // held between position refreshes
    double d_t_ = 0.0;                      // held between height refreshes
    double since_pos_ = 0.0, since_h_ = 0.0;
};

}  // namespace hexevo
