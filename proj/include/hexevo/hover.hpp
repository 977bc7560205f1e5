#pragma once

// Hover benchmark: scheduled waypoints, per-cycle fitness, health
// monitoring, and the evaluation/seeding protocol.

#include <cstdint>
#include <optional>
#include <vector>

#include "hexevo/cascade.hpp"
#include "hexevo/de.hpp"
#include "hexevo/sim.hpp"

namespace hexevo {

// One scheduled setpoint window, half-open in time.
struct Waypoint {
    Setpoint sp;
    double t_start = 0.0;
    double t_end = 0.0;
};

// Fixed 40 s schedule; throws std::out_of_range outside [0, 40).
Waypoint waypoint_at(double t);

inline constexpr double kEvalDuration = 40.0;
inline constexpr int kEvalCycles = 16000;  // 40 s at 400 Hz
inline constexpr double kMaxFitness = 160000.0;

// Thresholds for the fitness terms: noise floors, deadband ranges and
// the two-piece tracking kernels' core/outer limits.
struct StateLimits {
    double omega_max = 115.0, omega_noise = 30.0;  // deg/s
    double vh_noise = 5.0, vh_max = 15.0;          // cm/s, horizontal
    double vv_noise = 2.0, vv_max = 20.0;          // cm/s, vertical
    double attitude_max = 15.0;                    // deg
    double height_core = 5.0, height_max = 10.0;   // cm
    double yaw_core = 15.0, yaw_max = 160.0;       // deg
    double pos_core = 8.0, pos_max = 20.0;         // cm
};

// Two-piece tracking reward, monotone in |err| and continuous: linear
// from 1 at zero error to 1/4 at the core limit, then linear to 0 at the
// outer limit (clamped below at 0).
double tracking_reward(double abs_err, double core, double outer);

struct FitnessParts {
    double f_a = 0.0;      // [0, 2] roll+pitch tracking
    double f_vh = 0.0;     // [0, 1] horizontal speed
    double f_vv = 0.0;     // [0, 1] vertical speed
    double f_omega = 0.0;  // [0, 2] roll+pitch rates
    double f_h = 0.0;      // [0, 1] height tracking
    double f_y = 0.0;      // [0, 1] yaw tracking
    double f_p = 0.0;      // [0, 1] position tracking
    double f_l = 0.0;      // {0, 1} mixer saturation flag
    double total() const { return f_a + f_vh + f_vv + f_omega + f_h + f_y + f_p + f_l; }
};

FitnessParts fitness_parts(const SensorEstimate& est, const Setpoint& sp, bool pwm_at_limit,
                           const StateLimits& lim);
double fitness_cycle(const SensorEstimate& est, const Setpoint& sp, bool pwm_at_limit,
                     const StateLimits& lim);

enum class Termination {
    Completed,
    HealthHeight,
    HealthHorizontalVel,
    HealthVerticalVel,
    HealthAttitude,
    HealthYaw,
    HealthPwm,
    HealthCurrent,
    NoMovement,
    Landed,
    Diverged,
};
const char* termination_name(Termination t);

struct HealthRules {
    double height_cm = 18.0;
    double horizontal_vel_cms = 50.0;
    double vertical_vel_cms = 25.0;
    double attitude_deg = 15.0;
    double yaw_err_deg = 45.0;
    double pwm_rate_per_s = 75.0;   // upper-limit hits per second over 1 s
    bool current_proxy = true;      // battery-current stand-in
    double current_pwm = 1900.0;    // mean command above this ...
    double current_hold_s = 1.0;    // ... sustained this long
    double movement_cm = 1.0;       // displacement from the reset pose ...
    double movement_hold_s = 0.25;  // ... sustained this long counts as movement
    double movement_window_s = 5.0;
    double landed_hold_s = 1.0;
    double flown_s = 0.2;  // airborne time after which a landing terminates
};

// Per-cycle safety checks over the estimate, the commands just issued
// and the ground contact flag.  First violated rule terminates.
class HealthMonitor {
public:
    HealthMonitor(const HealthRules& rules, double dt, double pwm_high);

    std::optional<Termination> check(const SensorEstimate& est, const Setpoint& sp,
                                     const MotorCommands& cmds, bool on_ground, double t);

    double max_airborne_s() const { return max_airborne_ * dt_; }

private:
    HealthRules rules_;
    double dt_;
    double pwm_high_;
    std::vector<std::uint8_t> pwm_ring_;
    int ring_pos_ = 0;
    int pwm_hits_ = 0;
    long current_streak_ = 0;
    long moved_streak_ = 0;
    bool moved_ = false;
    long airborne_streak_ = 0;
    long max_airborne_ = 0;
    bool flown_ = false;
    long contact_streak_ = 0;
};

struct EvalResult {
    double fitness = 0.0;
    double duration = 0.0;  // seconds scored
    Termination termination = Termination::Completed;
    bool success = false;   // completed the full pair of evaluations
    int flights = 1;
    double max_airborne_s = 0.0;
};

struct SeedingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct HoverTaskConfig {
    VehicleParams vehicle;
    WindModel wind;
    SensorNoise noise;
    ControlLimits control;
    StateLimits limits;
    HealthRules health;
    RateBounds rate_bounds;
    double probe_s = 5.0;        // seeding probe budget
    double yaw_slew_dps = 40.0;  // commanded-heading slew toward the waypoint yaw
    double reset_psi_deg = 40.0;
    int population_size = 20;
    int seed_max_attempts = 10000;
};

class HoverEvaluator {
public:
    explicit HoverEvaluator(const HoverTaskConfig& cfg);

    // Single flight from the reset pose.  noise_key seeds the sensor
    // noise stream; ideal_tracking replaces vehicle, estimator and
    // controller with a stub pinned to the waypoint (oracle hook).
    EvalResult run_flight(const Genome& genome, std::uint64_t noise_key, double budget_s,
                          bool ideal_tracking = false) const;

    // Full protocol: one flight, and on completion a second one; the
    // result carries the mean fitness and success = both completed.
    EvalResult evaluate(const Genome& genome, std::uint64_t eval_key) const;

    // Adapter for generation_step.
    EvalScore score(const Genome& genome, std::uint64_t eval_key) const;

    // Draw random genomes, probe-fly each for probe_s and admit the ones
    // that got airborne for more than flown_s; admitted genomes receive
    // a full evaluation and fresh rates.  Throws SeedingError when the
    // attempt budget runs out.  flights_out (optional) accumulates the
    // number of flights consumed.
    Population seed_population(Strategy strategy, std::uint64_t run_seed,
                               int* flights_out = nullptr) const;

    std::vector<GeneSpec> gene_specs() const { return hover_gene_specs(cfg_.control); }
    const HoverTaskConfig& config() const { return cfg_; }

private:
    HoverTaskConfig cfg_;
};

}  // namespace hexevo
