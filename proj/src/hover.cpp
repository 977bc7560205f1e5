#include "hexevo/hover.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hexevo/mathutil.hpp"

namespace hexevo {

Waypoint waypoint_at(double t) {
    if (!(t >= 0.0 && t < kEvalDuration))
        throw std::out_of_range("waypoint time outside [0, 40)");
    Waypoint w;
    if (t < 8.0) {
        w = {Setpoint{0.0, 0.0, 10.0, 0.0, 0.0, 40.0}, 0.0, 8.0};
    } else if (t < 16.0) {
        // 8 cm north, 8 cm west of the centre.
        w = {Setpoint{8.0, -8.0, 10.0, 0.0, 0.0, 0.0}, 8.0, 16.0};
    } else if (t < 24.0) {
        // Climb to 14 cm; 16 cm south, 16 cm east of the previous target.
        w = {Setpoint{-8.0, 8.0, 14.0, 0.0, 0.0, 0.0}, 16.0, 24.0};
    } else if (t < 32.0) {
        w = {Setpoint{0.0, 0.0, 14.0, 0.0, 0.0, 80.0}, 24.0, 32.0};
    } else {
        w = {Setpoint{0.0, 0.0, 14.0, 0.0, 0.0, 40.0}, 32.0, 40.0};
    }
    return w;
}

double tracking_reward(double abs_err, double core, double outer) {
    if (abs_err <= core)
        return 1.0 - 3.0 * abs_err / (4.0 * core);
    return std::max((outer - abs_err) / (4.0 * (outer - core)), 0.0);
}

FitnessParts fitness_parts(const SensorEstimate& est, const Setpoint& sp, bool pwm_at_limit,
                           const StateLimits& lim) {
    FitnessParts f;
    f.f_a = std::max(1.0 - std::abs(sp.phi - est.phi) / lim.attitude_max, 0.0) +
            std::max(1.0 - std::abs(sp.theta - est.theta) / lim.attitude_max, 0.0);
    f.f_vh = std::max(1.0 - deadband(std::hypot(est.v_n, est.v_e), lim.vh_noise) / lim.vh_max, 0.0);
    f.f_vv = std::max(1.0 - deadband(std::abs(est.v_h), lim.vv_noise) / lim.vv_max, 0.0);
    f.f_omega = std::max(1.0 - deadband(std::abs(est.omega_p), lim.omega_noise) / lim.omega_max, 0.0) +
                std::max(1.0 - deadband(std::abs(est.omega_q), lim.omega_noise) / lim.omega_max, 0.0);
    f.f_h = tracking_reward(std::abs(sp.h - est.h), lim.height_core, lim.height_max);
    f.f_y = tracking_reward(std::abs(wrap_angle(sp.psi - est.psi)), lim.yaw_core, lim.yaw_max);
    f.f_p = tracking_reward(std::hypot(sp.p_n - est.p_n, sp.p_e - est.p_e), lim.pos_core, lim.pos_max);
    f.f_l = pwm_at_limit ? 0.0 : 1.0;
    return f;
}

double fitness_cycle(const SensorEstimate& est, const Setpoint& sp, bool pwm_at_limit,
                     const StateLimits& lim) {
    return fitness_parts(est, sp, pwm_at_limit, lim).total();
}

const char* termination_name(Termination t) {
    switch (t) {
        case Termination::Completed: return "completed";
        case Termination::HealthHeight: return "health_height";
        case Termination::HealthHorizontalVel: return "health_hvel";
        case Termination::HealthVerticalVel: return "health_vvel";
        case Termination::HealthAttitude: return "health_attitude";
        case Termination::HealthYaw: return "health_yaw";
        case Termination::HealthPwm: return "health_pwm";
        case Termination::HealthCurrent: return "health_current";
        case Termination::NoMovement: return "no_movement";
        case Termination::Landed: return "landed";
        case Termination::Diverged: return "diverged";
    }
    return "?";
}

HealthMonitor::HealthMonitor(const HealthRules& rules, double dt, double pwm_high)
    : rules_(rules), dt_(dt), pwm_high_(pwm_high),
      pwm_ring_(static_cast<std::size_t>(std::lround(1.0 / dt)), 0) {}

std::optional<Termination> HealthMonitor::check(const SensorEstimate& est, const Setpoint& sp,
                                                const MotorCommands& cmds, bool on_ground,
                                                double t) {
    // Trackers first.
    const bool upper = any_at_upper_limit(cmds, pwm_high_);
    pwm_hits_ -= pwm_ring_[static_cast<std::size_t>(ring_pos_)];
    pwm_ring_[static_cast<std::size_t>(ring_pos_)] = upper ? 1 : 0;
    pwm_hits_ += pwm_ring_[static_cast<std::size_t>(ring_pos_)];
    ring_pos_ = (ring_pos_ + 1) % static_cast<int>(pwm_ring_.size());

    double mean_cmd = 0.0;
    for (double u : cmds)
        mean_cmd += u;
    mean_cmd /= 6.0;
    current_streak_ = mean_cmd > rules_.current_pwm ? current_streak_ + 1 : 0;

    const double displacement = std::sqrt(est.p_n * est.p_n + est.p_e * est.p_e + est.h * est.h);
    moved_streak_ = displacement > rules_.movement_cm ? moved_streak_ + 1 : 0;
    if (static_cast<double>(moved_streak_) * dt_ >= rules_.movement_hold_s)
        moved_ = true;

    if (!on_ground) {
        ++airborne_streak_;
        max_airborne_ = std::max(max_airborne_, airborne_streak_);
        if (static_cast<double>(airborne_streak_) * dt_ >= rules_.flown_s)
            flown_ = true;
        contact_streak_ = 0;
    } else {
        airborne_streak_ = 0;
        ++contact_streak_;
    }

    // Rules, first hit terminates.
    if (est.h > rules_.height_cm)
        return Termination::HealthHeight;
    if (std::abs(est.v_n) > rules_.horizontal_vel_cms || std::abs(est.v_e) > rules_.horizontal_vel_cms)
        return Termination::HealthHorizontalVel;
    if (std::abs(est.v_h) > rules_.vertical_vel_cms)
        return Termination::HealthVerticalVel;
    if (std::abs(est.phi) > rules_.attitude_deg || std::abs(est.theta) > rules_.attitude_deg)
        return Termination::HealthAttitude;
    if (std::abs(wrap_angle(sp.psi - est.psi)) > rules_.yaw_err_deg)
        return Termination::HealthYaw;
    if (static_cast<double>(pwm_hits_) > rules_.pwm_rate_per_s)
        return Termination::HealthPwm;
    if (rules_.current_proxy &&
        static_cast<double>(current_streak_) * dt_ > rules_.current_hold_s)
        return Termination::HealthCurrent;
    if (t >= rules_.movement_window_s && !moved_)
        return Termination::NoMovement;
    if (flown_ && static_cast<double>(contact_streak_) * dt_ > rules_.landed_hold_s)
        return Termination::Landed;
    return std::nullopt;
}

HoverEvaluator::HoverEvaluator(const HoverTaskConfig& cfg) : cfg_(cfg) {}

EvalResult HoverEvaluator::run_flight(const Genome& genome, std::uint64_t noise_key,
                                      double budget_s, bool ideal_tracking) const {
    VehicleState st;
    st.psi = cfg_.reset_psi_deg;
    st.psi_ref = cfg_.reset_psi_deg;
    st.on_ground = true;

    RngStream noise_rng(noise_key);
    SensorModel sensors(cfg_.noise);
    CascadeController ctl(genome, cfg_.control, cfg_.vehicle.hover_base(),
                          cfg_.vehicle.pwm_low, cfg_.vehicle.pwm_high);
    HealthMonitor health(cfg_.health, kSimDt, cfg_.vehicle.pwm_high);
    const MotorCommands hover_cmds = mix(0.0, 0.0, 0.0, 0.0, cfg_.vehicle.hover_base(),
                                         cfg_.vehicle.pwm_low, cfg_.vehicle.pwm_high);
    double yaw_ref = cfg_.reset_psi_deg;

    const int budget = static_cast<int>(std::lround(budget_s * kSimRate));
    EvalResult out;
    out.termination = Termination::Completed;
    out.duration = budget_s;

    for (int k = 0; k < budget; ++k) {
        const double t = static_cast<double>(k) * kSimDt;
        Setpoint sp = waypoint_at(t).sp;
        SensorEstimate est;
        MotorCommands cmds;
        if (ideal_tracking) {
            st.p_n = sp.p_n;
            st.p_e = sp.p_e;
            st.h = sp.h;
            st.v_n = st.v_e = st.v_h = 0.0;
            st.phi = sp.phi;
            st.theta = sp.theta;
            st.psi = sp.psi;
            st.omega_p = st.omega_q = st.omega_r = 0.0;
            st.on_ground = false;
            yaw_ref = sp.psi;
            est = perfect_estimate(st);
            cmds = hover_cmds;
        } else {
            // The commanded heading slews toward the waypoint yaw; the
            // controller, fitness and health all track this reference.
            yaw_ref += clamp_abs(wrap_angle(sp.psi - yaw_ref), cfg_.yaw_slew_dps * kSimDt);
            sp.psi = yaw_ref;
            est = sensors.sample(st, noise_rng);
            cmds = ctl.step(est, sp, kSimDt);
        }

        if (auto term = health.check(est, sp, cmds, st.on_ground, t)) {
            out.termination = *term;
            out.duration = static_cast<double>(k) * kSimDt;
            out.max_airborne_s = health.max_airborne_s();
            return out;
        }

        out.fitness += fitness_cycle(est, sp, any_at_limit(cmds, cfg_.vehicle.pwm_low,
                                                           cfg_.vehicle.pwm_high),
                                     cfg_.limits);

        if (ideal_tracking) {
            st.t += kSimDt;
        } else {
            try {
                sim_step(st, cfg_.vehicle, cmds, wind_at(cfg_.wind, t), kSimDt);
            } catch (const SimDiverged&) {
                out.termination = Termination::Diverged;
                out.duration = static_cast<double>(k + 1) * kSimDt;
                out.max_airborne_s = health.max_airborne_s();
                return out;
            }
        }
    }
    out.success = true;
    out.max_airborne_s = health.max_airborne_s();
    return out;
}

EvalResult HoverEvaluator::evaluate(const Genome& genome, std::uint64_t eval_key) const {
    EvalResult first =
        run_flight(genome, mix_seed({eval_key, stream::kAttempt, 0}), kEvalDuration);
    if (first.termination != Termination::Completed) {
        first.success = false;
        return first;
    }
    EvalResult second =
        run_flight(genome, mix_seed({eval_key, stream::kAttempt, 1}), kEvalDuration);
    EvalResult out = second;
    out.fitness = 0.5 * (first.fitness + second.fitness);
    out.success = second.termination == Termination::Completed;
    out.flights = 2;
    out.max_airborne_s = std::max(first.max_airborne_s, second.max_airborne_s);
    return out;
}

EvalScore HoverEvaluator::score(const Genome& genome, std::uint64_t eval_key) const {
    EvalResult r = evaluate(genome, eval_key);
    return EvalScore{r.fitness, r.success, r.flights};
}

Population HoverEvaluator::seed_population(Strategy strategy, std::uint64_t run_seed,
                                           int* flights_out) const {
    const std::vector<GeneSpec> specs = gene_specs();
    RngStream draw(mix_seed({run_seed, stream::kSeeding, 0}));
    Population pop;
    int flights = 0;
    for (int attempt = 0; attempt < cfg_.seed_max_attempts && pop.size() < cfg_.population_size;
         ++attempt) {
        Genome genome = init_genome(specs, draw);
        EvalResult probe = run_flight(
            genome,
            mix_seed({run_seed, stream::kSeeding, static_cast<std::uint64_t>(attempt), 1}),
            cfg_.probe_s);
        ++flights;
        if (!(probe.max_airborne_s > cfg_.health.flown_s))
            continue;
        EvalResult full = evaluate(
            genome,
            mix_seed({run_seed, stream::kSeeding, static_cast<std::uint64_t>(attempt), 2}));
        flights += full.flights;
        Individual ind;
        ind.genome = std::move(genome);
        ind.rates = strategy == Strategy::Static ? static_rates()
                                                 : init_rates(cfg_.rate_bounds, draw);
        ind.fitness = full.fitness;
        ind.success = full.success;
        pop.members.push_back(std::move(ind));
    }
    if (flights_out)
        *flights_out += flights;
    if (pop.size() < cfg_.population_size)
        throw SeedingError("population seeding exhausted its attempt budget");
    for (const Individual& m : pop.members)
        pop.best_fitness_seen = std::max(pop.best_fitness_seen, m.fitness);
    return pop;
}

}  // namespace hexevo
