#include "hexevo/pid.hpp"

#include "hexevo/mathutil.hpp"

namespace hexevo {

double limit_error(double error, double limit) {
    return clamp_abs(error, limit);
}

double pid_step(PidState& state, const PidGains& gains, double error, double dt,
                double windup_cap) {
    state.integral = clamp_abs(state.integral + error * dt, windup_cap);
    const double derivative = state.primed ? (error - state.prev_error) / dt : 0.0;
    state.prev_error = error;
    state.primed = true;
    return gains.kp * error + gains.ki * state.integral + gains.kd * derivative;
}

}  // namespace hexevo
