#pragma once

// Benchmarking protocol: success probability, time-to-solution with a
// confidence target, size sweeps over the number of time points, and
// exponential scaling fits with JSON/CSV reports.

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "paraqube/io.hpp"
#include "paraqube/models.hpp"
#include "paraqube/solvers.hpp"

namespace paraqube {

// Fraction of returned samples whose energy reaches the ground level within
// the tolerance; degenerate ground states all count.
inline double success_probability(const SampleSet& samples, double ground_energy,
                                  double tol = 1e-9) {
    detail::require(!samples.records.empty() && samples.total_count > 0,
                    "success_probability: empty sample set");
    detail::require(tol >= 0.0, "success_probability: tolerance must be non-negative");
    std::size_t hits = 0;
    for (const auto& rec : samples.records)
        if (rec.energy <= ground_energy + tol) hits += rec.count;
    return double(hits) / double(samples.total_count);
}

// Expected wall time to observe the ground state at least once with
// confidence p_target, given per-run success probability and run time. The
// repetition count is clamped to >= 1: one run that already meets the target
// costs one run.
inline double time_to_solution(double p_success, double p_target, double t_run) {
    detail::require(p_success >= 0.0 && p_success <= 1.0,
                    "time_to_solution: p_success must lie in [0, 1]");
    detail::require(p_target > 0.0 && p_target < 1.0,
                    "time_to_solution: p_target must lie in (0, 1)");
    detail::require(t_run > 0.0, "time_to_solution: t_run must be positive");
    if (p_success == 0.0) return std::numeric_limits<double>::infinity();
    if (p_success >= 1.0) return t_run;
    const double repetitions = std::log1p(-p_target) / std::log1p(-p_success);
    return std::max(1.0, repetitions) * t_run;
}

struct RunRecord {
    std::string system;
    std::size_t n_points = 0;
    std::size_t n_vars = 0;  // real variable count before binarization, 2*L*N
    std::size_t n_bits = 0;
    std::string solver;
    std::size_t samples = 0;  // per run
    std::size_t runs = 0;
    double p_success = 0.0;
    double t_run = 0.0;  // seconds, averaged over runs
    double tts = std::numeric_limits<double>::infinity();
    double ground_energy = 0.0;
    bool ground_certified = false;
};

struct SolverChoice {
    std::string name = "sa";  // "sa" | "ballistic" | "bruteforce"
    SaConfig sa;
    BallisticConfig ballistic;
    std::size_t brute_force_max_bits = 30;
};

// One solver invocation producing `samples` draws (exhaustive search ignores
// the sample count and returns the ground manifold).
inline SampleSet run_solver(const QuboInstance& inst, const SolverChoice& choice,
                            std::size_t samples, std::uint64_t seed,
                            std::size_t n_threads = 1) {
    if (choice.name == "sa") {
        SaConfig cfg = choice.sa;
        cfg.restarts = samples;
        return simulated_annealing(inst, cfg, seed, n_threads);
    }
    if (choice.name == "ballistic") {
        BallisticConfig cfg = choice.ballistic;
        cfg.restarts = samples;
        return ballistic_solve(inst, cfg, seed, n_threads);
    }
    if (choice.name == "bruteforce") return brute_force_samples(inst, choice.brute_force_max_bits);
    throw std::invalid_argument("run_solver: unknown solver '" + choice.name + "'");
}

struct SweepConfig {
    SystemSpec system;
    std::vector<std::size_t> n_points;
    double t0 = 0.0;
    double tf = 1.0;
    StateChoice psi0;
    FixedPointCode code{2, 0};
    SolverChoice solver;
    std::size_t samples_per_run = 1000;
    std::size_t runs = 20;
    double p_target = 0.99;
    double tol = 1e-9;
    std::uint64_t seed = 1;
    std::size_t ground_cap_bits = 26;
};

// Size sweep over time-point counts. Ground energies come from the exact
// component decomposition when feasible; otherwise the best energy seen
// across all runs stands in, flagged as uncertified. Per-run seeds derive
// from (master seed, size index, run index), so results are reproducible.
inline std::vector<RunRecord> sweep(const SweepConfig& cfg, std::size_t n_threads = 1) {
    detail::require(!cfg.n_points.empty(), "sweep: no grid sizes given");
    detail::require(cfg.samples_per_run >= 1 && cfg.runs >= 1,
                    "sweep: samples and runs must be positive");

    std::vector<RunRecord> records;
    records.reserve(cfg.n_points.size());
    const ComplexMatrix h = build_hamiltonian(cfg.system);

    for (std::size_t size_idx = 0; size_idx < cfg.n_points.size(); ++size_idx) {
        const std::size_t np = cfg.n_points[size_idx];
        const TimeGrid grid{cfg.t0, cfg.tf, np};
        const ComplexVector psi0 = initial_state(cfg.system, cfg.psi0);
        const ClockSystem sys = make_clock_system(h, grid, psi0);
        const QuboInstance inst = encode_qubo(sys, cfg.code, to_string(cfg.system.id));

        RunRecord rec;
        rec.system = inst.system;
        rec.n_points = np;
        rec.n_vars = 2 * inst.L * inst.N;
        rec.n_bits = inst.n_bits;
        rec.solver = cfg.solver.name;
        rec.samples = cfg.samples_per_run;
        rec.runs = cfg.runs;

        bool certified = false;
        double ground = std::numeric_limits<double>::infinity();
        try {
            ground = exact_ground_decomposed(inst, cfg.ground_cap_bits).ground_energy;
            certified = true;
        } catch (const std::runtime_error&) {
            // Component too large; fall back to the pooled best-known energy.
        }

        std::vector<SampleSet> run_sets(cfg.runs);
        auto run_one = [&](std::size_t r) {
            const std::uint64_t run_seed =
                derive_seed(cfg.seed, size_idx * cfg.runs + r);
            run_sets[r] = run_solver(inst, cfg.solver, cfg.samples_per_run, run_seed, 1);
        };
        detail::run_restarts(cfg.runs, n_threads, run_one);

        if (!certified)
            for (const auto& set : run_sets) ground = std::min(ground, set.best().energy);

        double p_sum = 0.0, t_sum = 0.0;
        for (const auto& set : run_sets) {
            p_sum += success_probability(set, ground, cfg.tol);
            t_sum += set.wall_time_s;
        }
        rec.p_success = p_sum / double(cfg.runs);
        rec.t_run = t_sum / double(cfg.runs);
        rec.ground_energy = ground;
        rec.ground_certified = certified;
        rec.tts = rec.t_run > 0.0
                      ? time_to_solution(rec.p_success, cfg.p_target, rec.t_run)
                      : std::numeric_limits<double>::infinity();
        records.push_back(std::move(rec));
    }
    return records;
}

struct FitResult {
    double d_fit = 0.0;  // seconds
    double beta = 0.0;
    double r_squared = 0.0;
    std::size_t n_used = 0;
    std::size_t n_excluded = 0;  // records dropped for infinite TTS
    std::string warning;
};

// Least squares of ln(TTS) against n_vars, modelling TTS = D exp(n_vars/beta).
// Infinite-TTS records are excluded and counted; a non-positive slope yields
// an infinite beta sentinel with a warning instead of a bogus scale.
inline FitResult fit_exponential(const std::vector<RunRecord>& records) {
    std::vector<double> xs, ys;
    FitResult fit;
    for (const auto& rec : records) {
        if (std::isfinite(rec.tts) && rec.tts > 0.0) {
            xs.push_back(double(rec.n_vars));
            ys.push_back(std::log(rec.tts));
        } else {
            ++fit.n_excluded;
        }
    }
    fit.n_used = xs.size();

    bool distinct = false;
    for (std::size_t k = 1; k < xs.size(); ++k)
        if (xs[k] != xs[0]) distinct = true;
    if (xs.size() < 2 || !distinct)
        throw std::invalid_argument(
            "fit_exponential: need at least two finite-TTS records with distinct sizes");

    const double n = double(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sx += xs[k];
        sy += ys[k];
        sxx += xs[k] * xs[k];
        sxy += xs[k] * ys[k];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;

    double ss_res = 0.0, ss_tot = 0.0;
    const double y_mean = sy / n;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double fitted = intercept + slope * xs[k];
        ss_res += (ys[k] - fitted) * (ys[k] - fitted);
        ss_tot += (ys[k] - y_mean) * (ys[k] - y_mean);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.d_fit = std::exp(intercept);
    if (slope <= 0.0) {
        fit.beta = std::numeric_limits<double>::infinity();
        fit.warning = "non-positive slope: TTS does not grow with size on these records";
    } else {
        fit.beta = 1.0 / slope;
    }
    return fit;
}

namespace detail {

inline nlohmann::json run_record_to_json(const RunRecord& rec) {
    nlohmann::json j;
    j["system"] = rec.system;
    j["n_points"] = rec.n_points;
    j["n_vars"] = rec.n_vars;
    j["n_bits"] = rec.n_bits;
    j["solver"] = rec.solver;
    j["samples"] = rec.samples;
    j["runs"] = rec.runs;
    j["p_success"] = rec.p_success;
    j["t_run"] = rec.t_run;
    if (std::isfinite(rec.tts))
        j["tts"] = rec.tts;
    else
        j["tts"] = nullptr;
    j["ground_energy"] = rec.ground_energy;
    j["ground_certified"] = rec.ground_certified;
    return j;
}

inline nlohmann::json fit_result_to_json(const FitResult& fit) {
    nlohmann::json j;
    j["d_fit"] = fit.d_fit;
    if (std::isfinite(fit.beta))
        j["beta"] = fit.beta;
    else
        j["beta"] = nullptr;
    j["r_squared"] = fit.r_squared;
    j["n_used"] = fit.n_used;
    j["n_excluded"] = fit.n_excluded;
    if (!fit.warning.empty()) j["warning"] = fit.warning;
    return j;
}

}  // namespace detail

struct BenchReport {
    std::vector<RunRecord> records;
    double p_target = 0.99;
};

// JSON report: every run record, a fit per (system, solver) group with at
// least two usable sizes, and the pooled fit over all records.
inline nlohmann::json report_to_json(const BenchReport& report) {
    nlohmann::json j;
    j["format"] = "paraqube-bench v1";
    j["p_target"] = report.p_target;
    j["records"] = nlohmann::json::array();
    for (const auto& rec : report.records) j["records"].push_back(detail::run_record_to_json(rec));

    std::map<std::string, std::vector<RunRecord>> groups;
    for (const auto& rec : report.records) groups[rec.system + "/" + rec.solver].push_back(rec);
    j["fits"] = nlohmann::json::object();
    for (const auto& [key, group] : groups) {
        try {
            j["fits"][key] = detail::fit_result_to_json(fit_exponential(group));
        } catch (const std::invalid_argument& err) {
            j["fits"][key] = {{"error", err.what()}};
        }
    }
    try {
        j["pooled_fit"] = detail::fit_result_to_json(fit_exponential(report.records));
    } catch (const std::invalid_argument& err) {
        j["pooled_fit"] = {{"error", err.what()}};
    }
    return j;
}

inline void write_report_json(const BenchReport& report, const std::string& path) {
    auto os = detail::open_output(path, "write_report_json");
    os << report_to_json(report).dump(2) << "\n";
}

// CSV mirror of the run records for plotting; infinite TTS renders as "inf".
inline void write_report_csv(const std::vector<RunRecord>& records, const std::string& path) {
    auto os = detail::open_output(path, "write_report_csv");
    os << "system,n_points,n_vars,n_bits,solver,samples,runs,p_success,t_run,tts,"
          "ground_energy,ground_certified\n";
    for (const auto& rec : records) {
        os << rec.system << "," << rec.n_points << "," << rec.n_vars << "," << rec.n_bits << ","
           << rec.solver << "," << rec.samples << "," << rec.runs << ","
           << format_double(rec.p_success) << "," << format_double(rec.t_run) << ","
           << (std::isfinite(rec.tts) ? format_double(rec.tts) : std::string("inf")) << ","
           << format_double(rec.ground_energy) << "," << (rec.ground_certified ? "1" : "0")
           << "\n";
    }
}

}  // namespace paraqube
