#include "hexevo/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace hexevo {

const char* const kGenerationCsvHeader =
    "generation,high_f,mean_f,low_f,mean_cr,mean_f_rate,restarts,evals";
const char* const kEventCsvHeader = "generation,scope,slot,old_cr,old_f,new_cr,new_f";
const char* const kSummaryCsvHeader =
    "strategy,seed,convergence_generation,high_f,mean_f,low_f,mean_cr,mean_f_rate,restart_count";
const char* const kComparisonCsvHeader = "metric,strategy_a,strategy_b,n_a,n_b,u,p,significant";

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes" || v == "on")
        return true;
    if (v == "false" || v == "0" || v == "no" || v == "off")
        return false;
    throw ConfigError("bad boolean for " + key + ": " + v);
}

double parse_double(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("bad number for " + key + ": " + v);
    }
}

int parse_int(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const int i = std::stoi(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ConfigError("bad integer for " + key + ": " + v);
    }
}

std::uint64_t parse_u64(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const unsigned long long u = std::stoull(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return u;
    } catch (const std::exception&) {
        throw ConfigError("bad seed for " + key + ": " + v);
    }
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
        out.push_back(cell);
    return out;
}

GenerationStats population_stats(const Population& pop, int generation, int evals) {
    GenerationStats st;
    st.generation = generation;
    st.evals = evals;
    st.high_f = pop.members.front().fitness;
    st.low_f = pop.members.front().fitness;
    st.all_success = true;
    double sum_f = 0.0, sum_cr = 0.0, sum_fr = 0.0;
    for (const Individual& m : pop.members) {
        st.high_f = std::max(st.high_f, m.fitness);
        st.low_f = std::min(st.low_f, m.fitness);
        sum_f += m.fitness;
        sum_cr += m.rates.cr;
        sum_fr += m.rates.f;
        st.all_success = st.all_success && m.success;
    }
    st.mean_f = sum_f / pop.size();
    st.mean_cr = sum_cr / pop.size();
    st.mean_f_rate = sum_fr / pop.size();
    return st;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw IoError("cannot write " + path.string());
    return out;
}

void write_generation_row(std::ofstream& out, const GenerationStats& st) {
    out << st.generation << ',' << fmt(st.high_f) << ',' << fmt(st.mean_f) << ','
        << fmt(st.low_f) << ',' << fmt(st.mean_cr) << ',' << fmt(st.mean_f_rate) << ','
        << st.restarted_slots << ',' << st.evals << '\n';
}

void write_event_rows(std::ofstream& out, const GenerationStats& st) {
    for (const RestartEvent& ev : st.events)
        for (const RateChange& ch : ev.changes)
            out << ev.generation << ',' << (ev.global ? "global" : "indiv") << ',' << ch.slot
                << ',' << fmt(ch.before.cr) << ',' << fmt(ch.before.f) << ','
                << fmt(ch.after.cr) << ',' << fmt(ch.after.f) << '\n';
}

}  // namespace

void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    using Setter = std::function<void(ExperimentConfig&, const std::string&)>;
    static const std::map<std::string, Setter> setters = {
        {"strategy", [](ExperimentConfig& c, const std::string& v) {
             try {
                 c.strategy = parse_strategy(v);
             } catch (const std::invalid_argument& e) {
                 throw ConfigError(e.what());
             }
         }},
        {"repeats", [](ExperimentConfig& c, const std::string& v) { c.repeats = parse_int(v, "repeats"); }},
        {"population_size", [](ExperimentConfig& c, const std::string& v) {
             c.task.population_size = parse_int(v, "population_size");
         }},
        {"restart_threshold", [](ExperimentConfig& c, const std::string& v) {
             c.restart_threshold = parse_int(v, "restart_threshold");
         }},
        {"master_seed", [](ExperimentConfig& c, const std::string& v) {
             c.master_seed = parse_u64(v, "master_seed");
         }},
        {"max_generations", [](ExperimentConfig& c, const std::string& v) {
             c.max_generations = parse_int(v, "max_generations");
         }},
        {"noise", [](ExperimentConfig& c, const std::string& v) {
             c.task.noise.enabled = parse_bool(v, "noise");
         }},
        {"allow_nonconverged", [](ExperimentConfig& c, const std::string& v) {
             c.allow_nonconverged = parse_bool(v, "allow_nonconverged");
         }},
        {"threads", [](ExperimentConfig& c, const std::string& v) { c.threads = parse_int(v, "threads"); }},
        {"out_dir", [](ExperimentConfig& c, const std::string& v) { c.out_dir = v; }},
        {"sim.mass_kg", [](ExperimentConfig& c, const std::string& v) {
             c.task.vehicle.mass_kg = parse_double(v, "sim.mass_kg");
         }},
        {"sim.arm_m", [](ExperimentConfig& c, const std::string& v) {
             c.task.vehicle.arm_m = parse_double(v, "sim.arm_m");
         }},
        {"sim.inertia_xx", [](ExperimentConfig& c, const std::string& v) {
             c.task.vehicle.inertia_xx = parse_double(v, "sim.inertia_xx");
         }},
        {"sim.inertia_yy", [](ExperimentConfig& c, const std::string& v) {
             c.task.vehicle.inertia_yy = parse_double(v, "sim.inertia_yy");
         }},
        {"sim.inertia_zz", [](ExperimentConfig& c, const std::string& v) {
             c.task.vehicle.inertia_zz = parse_double(v, "sim.inertia_zz");
         }},
        {"sim.drag_linear", [](ExperimentConfig& c, const std::string& v) {
             c.task.vehicle.drag_linear = parse_double(v, "sim.drag_linear");
         }},
        {"sim.drag_angular", [](ExperimentConfig& c, const std::string& v) {
             c.task.vehicle.drag_angular = parse_double(v, "sim.drag_angular");
         }},
        {"sim.yaw_torque_arm", [](ExperimentConfig& c, const std::string& v) {
             c.task.vehicle.yaw_torque_arm = parse_double(v, "sim.yaw_torque_arm");
         }},
        {"sim.gravity", [](ExperimentConfig& c, const std::string& v) {
             c.task.vehicle.gravity = parse_double(v, "sim.gravity");
         }},
        {"sim.tilt_limit_deg", [](ExperimentConfig& c, const std::string& v) {
             c.task.vehicle.tilt_limit_deg = parse_double(v, "sim.tilt_limit_deg");
         }},
        {"sim.yaw_limit_deg", [](ExperimentConfig& c, const std::string& v) {
             c.task.vehicle.yaw_limit_deg = parse_double(v, "sim.yaw_limit_deg");
         }},
        {"sim.volume_n_cm", [](ExperimentConfig& c, const std::string& v) {
             c.task.vehicle.volume_n_cm = parse_double(v, "sim.volume_n_cm");
         }},
        {"sim.volume_e_cm", [](ExperimentConfig& c, const std::string& v) {
             c.task.vehicle.volume_e_cm = parse_double(v, "sim.volume_e_cm");
         }},
        {"sim.ceiling_cm", [](ExperimentConfig& c, const std::string& v) {
             c.task.vehicle.ceiling_cm = parse_double(v, "sim.ceiling_cm");
         }},
        {"sim.wall_spring", [](ExperimentConfig& c, const std::string& v) {
             c.task.vehicle.wall_spring = parse_double(v, "sim.wall_spring");
         }},
        {"wind.speed_cms", [](ExperimentConfig& c, const std::string& v) {
             c.task.wind.speed_cms = parse_double(v, "wind.speed_cms");
         }},
        {"wind.base_bearing_deg", [](ExperimentConfig& c, const std::string& v) {
             c.task.wind.base_bearing_deg = parse_double(v, "wind.base_bearing_deg");
         }},
        {"wind.swing_deg", [](ExperimentConfig& c, const std::string& v) {
             c.task.wind.swing_deg = parse_double(v, "wind.swing_deg");
         }},
        {"wind.period_s", [](ExperimentConfig& c, const std::string& v) {
             c.task.wind.period_s = parse_double(v, "wind.period_s");
         }},
        {"noise.attitude_std_deg", [](ExperimentConfig& c, const std::string& v) {
             c.task.noise.attitude_std_deg = parse_double(v, "noise.attitude_std_deg");
         }},
        {"noise.heading_std_deg", [](ExperimentConfig& c, const std::string& v) {
             c.task.noise.heading_std_deg = parse_double(v, "noise.heading_std_deg");
         }},
        {"noise.position_std_cm", [](ExperimentConfig& c, const std::string& v) {
             c.task.noise.position_std_cm = parse_double(v, "noise.position_std_cm");
         }},
        {"noise.height_std_cm", [](ExperimentConfig& c, const std::string& v) {
             c.task.noise.height_std_cm = parse_double(v, "noise.height_std_cm");
         }},
        {"task.probe_s", [](ExperimentConfig& c, const std::string& v) {
             c.task.probe_s = parse_double(v, "task.probe_s");
         }},
        {"task.yaw_slew_dps", [](ExperimentConfig& c, const std::string& v) {
             c.task.yaw_slew_dps = parse_double(v, "task.yaw_slew_dps");
         }},
        {"task.reset_psi_deg", [](ExperimentConfig& c, const std::string& v) {
             c.task.reset_psi_deg = parse_double(v, "task.reset_psi_deg");
         }},
        {"task.seed_max_attempts", [](ExperimentConfig& c, const std::string& v) {
             c.task.seed_max_attempts = parse_int(v, "task.seed_max_attempts");
         }},
        {"health.current_proxy", [](ExperimentConfig& c, const std::string& v) {
             c.task.health.current_proxy = parse_bool(v, "health.current_proxy");
         }},
    };
    const auto it = setters.find(key);
    if (it == setters.end())
        throw ConfigError("unknown config key: " + key);
    it->second(cfg, value);
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot read config file " + path);
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

void validate_config(const ExperimentConfig& cfg) {
    if (cfg.repeats < 1)
        throw ConfigError("repeats must be >= 1");
    if (cfg.task.population_size < 4)
        throw ConfigError("population_size must be >= 4 (donor sampling needs it)");
    if (cfg.restart_threshold < 1)
        throw ConfigError("restart_threshold must be >= 1");
    if (cfg.max_generations < 1)
        throw ConfigError("max_generations must be >= 1");
    if (cfg.task.probe_s <= 0.0 || cfg.task.probe_s > kEvalDuration)
        throw ConfigError("task.probe_s must be in (0, 40]");
    if (cfg.task.seed_max_attempts < cfg.task.population_size)
        throw ConfigError("task.seed_max_attempts must cover the population size");
    if (cfg.task.vehicle.mass_kg <= 0.0 || cfg.task.vehicle.arm_m <= 0.0)
        throw ConfigError("vehicle mass and arm length must be positive");
}

std::uint64_t derive_run_seed(std::uint64_t master_seed, Strategy strategy, int repeat) {
    return mix_seed({master_seed, static_cast<std::uint64_t>(strategy) + 101,
                     static_cast<std::uint64_t>(repeat)});
}

std::vector<RunSummary> run_experiment(const ExperimentConfig& cfg) {
    validate_config(cfg);
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec)
        throw IoError("cannot create output directory " + cfg.out_dir);

    HoverTaskConfig task = cfg.task;
    HoverEvaluator evaluator(task);
    DeConfig de;
    de.strategy = cfg.strategy;
    de.genes = evaluator.gene_specs();
    de.rate_bounds = task.rate_bounds;
    de.restart_threshold = cfg.restart_threshold;
    de.threads = cfg.threads;

    const std::string name = strategy_name(cfg.strategy);
    std::ofstream summary_out = open_out(fs::path(cfg.out_dir) / ("summary_" + name + ".csv"));
    summary_out << kSummaryCsvHeader << '\n';

    std::vector<RunSummary> summaries;
    bool all_converged = true;
    for (int repeat = 0; repeat < cfg.repeats; ++repeat) {
        const std::uint64_t run_seed = derive_run_seed(cfg.master_seed, cfg.strategy, repeat);
        const std::string base = name + "_r" + std::to_string(repeat);
        std::ofstream gen_out = open_out(fs::path(cfg.out_dir) / (base + "_generations.csv"));
        std::ofstream ev_out = open_out(fs::path(cfg.out_dir) / (base + "_events.csv"));
        gen_out << kGenerationCsvHeader << '\n';
        ev_out << kEventCsvHeader << '\n';

        int seed_flights = 0;
        Population pop = evaluator.seed_population(cfg.strategy, run_seed, &seed_flights);

        std::vector<GenerationStats> history;
        history.push_back(population_stats(pop, 0, seed_flights));
        write_generation_row(gen_out, history.back());

        const Evaluator fn = [&evaluator](const Genome& g, std::uint64_t key) {
            return evaluator.score(g, key);
        };
        for (int g = 1; g <= cfg.max_generations && !history.back().all_success; ++g) {
            history.push_back(generation_step(pop, de, fn, run_seed, g));
            write_generation_row(gen_out, history.back());
            write_event_rows(ev_out, history.back());
        }

        RunSummary s = summarize(history);
        s.strategy = name;
        s.seed = run_seed;
        all_converged = all_converged && s.converged;
        summary_out << s.strategy << ',' << s.seed << ',' << s.convergence_generation << ','
                    << fmt(s.high_f) << ',' << fmt(s.mean_f) << ',' << fmt(s.low_f) << ','
                    << fmt(s.mean_cr) << ',' << fmt(s.mean_f_rate) << ',' << s.restart_count
                    << '\n';
        summaries.push_back(std::move(s));
    }

    if (!all_converged && !cfg.allow_nonconverged)
        throw NonConvergence("at least one repeat hit max_generations without converging");
    return summaries;
}

CompareReport compare_strategies(const std::string& in_dir, double alpha) {
    namespace fs = std::filesystem;
    std::map<std::string, std::vector<RunSummary>> groups;
    if (!fs::is_directory(in_dir))
        throw IoError("not a directory: " + in_dir);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(in_dir)) {
        const std::string fname = entry.path().filename().string();
        if (fname.rfind("summary_", 0) == 0 && entry.path().extension() == ".csv")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& file : files) {
        std::ifstream in(file);
        if (!in)
            throw IoError("cannot read " + file.string());
        std::string line;
        if (!std::getline(in, line) || line != kSummaryCsvHeader)
            throw ConfigError("unexpected summary header in " + file.string());
        while (std::getline(in, line)) {
            if (trim(line).empty())
                continue;
            const auto cells = split_csv(line);
            if (cells.size() != 9)
                throw ConfigError("malformed summary row in " + file.string());
            RunSummary s;
            s.strategy = cells[0];
            s.seed = parse_u64(cells[1], "seed");
            s.convergence_generation = parse_int(cells[2], "convergence_generation");
            s.high_f = parse_double(cells[3], "high_f");
            s.mean_f = parse_double(cells[4], "mean_f");
            s.low_f = parse_double(cells[5], "low_f");
            s.mean_cr = parse_double(cells[6], "mean_cr");
            s.mean_f_rate = parse_double(cells[7], "mean_f_rate");
            s.restart_count = parse_int(cells[8], "restart_count");
            groups[s.strategy].push_back(std::move(s));
        }
    }

    if (groups.size() < 2)
        throw ConfigError("comparison needs summaries from at least two strategies");
    for (const auto& [name, rows] : groups)
        if (rows.size() < 2)
            throw ConfigError("strategy " + name + " has fewer than two repeats");

    using Getter = std::function<double(const RunSummary&)>;
    const std::vector<std::pair<std::string, Getter>> metrics = {
        {"convergence_generation", [](const RunSummary& s) { return double(s.convergence_generation); }},
        {"high_f", [](const RunSummary& s) { return s.high_f; }},
        {"mean_f", [](const RunSummary& s) { return s.mean_f; }},
        {"low_f", [](const RunSummary& s) { return s.low_f; }},
        {"mean_cr", [](const RunSummary& s) { return s.mean_cr; }},
        {"mean_f_rate", [](const RunSummary& s) { return s.mean_f_rate; }},
        {"restart_count", [](const RunSummary& s) { return double(s.restart_count); }},
    };

    CompareReport report;
    std::vector<std::string> names;
    for (const auto& [name, rows] : groups) {
        (void)rows;
        names.push_back(name);
    }
    for (std::size_t i = 0; i < names.size(); ++i) {
        for (std::size_t j = i + 1; j < names.size(); ++j) {
            for (const auto& [metric, get] : metrics) {
                std::vector<double> va, vb;
                for (const RunSummary& s : groups[names[i]])
                    va.push_back(get(s));
                for (const RunSummary& s : groups[names[j]])
                    vb.push_back(get(s));
                CompareCell cell;
                cell.metric = metric;
                cell.strategy_a = names[i];
                cell.strategy_b = names[j];
                cell.n_a = static_cast<int>(va.size());
                cell.n_b = static_cast<int>(vb.size());
                cell.test = mann_whitney_u(va, vb, alpha);
                report.cells.push_back(std::move(cell));
            }
        }
    }

    std::ofstream out = open_out(fs::path(in_dir) / "comparison.csv");
    out << kComparisonCsvHeader << '\n';
    for (const CompareCell& c : report.cells)
        out << c.metric << ',' << c.strategy_a << ',' << c.strategy_b << ',' << c.n_a << ','
            << c.n_b << ',' << fmt(c.test.u) << ',' << fmt(c.test.p) << ','
            << (c.test.significant ? 1 : 0) << '\n';
    return report;
}

}  // namespace hexevo
