#pragma once

// Positional PID with clamped integral and first-difference derivative.

namespace hexevo {

struct PidGains {
    double kp = 0.0;
    double ki = 0.0;
    double kd = 0.0;
};

struct PidState {
    double integral = 0.0;
    double prev_error = 0.0;
    bool primed = false;  // derivative is zero on the first step
};

// Symmetric error clamp applied before a PID consumes an error.
double limit_error(double error, double limit);

// One update at step size dt.  The integral accumulates rectangle-rule
// and is clamped onto [-windup_cap, windup_cap].
double pid_step(PidState& state, const PidGains& gains, double error, double dt,
                double windup_cap);

}  // namespace hexevo
