#pragma once

// Classical solvers over QUBO instances: exhaustive gray-code search,
// exact grounds via connected-component decomposition, simulated annealing,
// and a momentum-based continuous relaxation heuristic.

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "paraqube/qubo.hpp"

namespace paraqube {

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Per-bit coupling lists for incremental energy updates.
struct Adjacency {
    std::vector<std::vector<std::pair<std::size_t, double>>> neighbors;

    explicit Adjacency(const QuboInstance& inst) : neighbors(inst.n_bits) {
        for (const auto& t : inst.quadratic) {
            neighbors[t.i].push_back({t.j, t.value});
            neighbors[t.j].push_back({t.i, t.value});
        }
    }
};

}  // namespace detail

// Independent deterministic RNG stream for restart index `stream` of a master
// seed; stable across thread counts and platforms.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return detail::mix64(master + (stream + 1) * 0x9E3779B97F4A7C15ull);
}

struct SampleRecord {
    Bits bits;
    double energy = 0.0;
    std::size_t count = 0;
};

struct SampleSet {
    std::string solver;
    std::uint64_t seed = 0;
    std::string config;
    double wall_time_s = 0.0;
    std::size_t total_count = 0;
    std::vector<SampleRecord> records;  // unique bit patterns, ascending (energy, bits)

    const SampleRecord& best() const {
        detail::require(!records.empty(), "SampleSet::best: empty sample set");
        return records.front();
    }
};

// Merge duplicate bit patterns (energies are exact recomputations, hence
// bitwise identical) and order by energy, ties broken lexicographically.
inline std::vector<SampleRecord> merge_sample_records(std::vector<SampleRecord> records) {
    std::sort(records.begin(), records.end(),
              [](const SampleRecord& a, const SampleRecord& b) { return a.bits < b.bits; });
    std::vector<SampleRecord> merged;
    for (auto& rec : records) {
        if (!merged.empty() && merged.back().bits == rec.bits)
            merged.back().count += rec.count;
        else
            merged.push_back(std::move(rec));
    }
    std::sort(merged.begin(), merged.end(), [](const SampleRecord& a, const SampleRecord& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        return a.bits < b.bits;
    });
    return merged;
}

struct BruteForceResult {
    double ground_energy = 0.0;
    std::vector<Bits> ground_states;  // lexicographically sorted, capped
    bool truncated = false;
    std::uint64_t evaluated = 0;
};

// Exhaustive minimization by gray-code enumeration. Energies are tracked
// incrementally; every near-ground candidate is recomputed exactly from its
// bits so accumulated rounding over long walks cannot corrupt the result.
inline BruteForceResult brute_force(const QuboInstance& inst, std::size_t max_bits = 30,
                                    double degeneracy_tol = 1e-12,
                                    std::size_t max_states = 4096) {
    detail::require(inst.n_bits >= 1, "brute_force: empty instance");
    detail::require(max_bits <= 40, "brute_force: bit cap beyond supported range");
    detail::require(inst.n_bits <= max_bits, "brute_force: instance exceeds the bit cap");

    const std::size_t n = inst.n_bits;
    const detail::Adjacency adj(inst);
    // Incremental drift stays far below this over walks up to the bit cap.
    const double drift_guard = 1e-7;

    Bits q(n, 0);
    RealVector field(inst.linear);
    double energy = inst.offset;

    BruteForceResult out;
    out.ground_energy = qubo_energy(inst, q);
    std::vector<std::pair<double, Bits>> near;
    near.push_back({out.ground_energy, q});

    auto prune = [&]() {
        near.erase(std::remove_if(near.begin(), near.end(),
                                  [&](const auto& c) {
                                      return c.first > out.ground_energy + degeneracy_tol;
                                  }),
                   near.end());
        if (near.size() > max_states) {
            out.truncated = true;
            near.resize(max_states);
        }
    };

    const std::uint64_t total = std::uint64_t(1) << n;
    for (std::uint64_t m = 1; m < total; ++m) {
        const auto b = static_cast<std::size_t>(std::countr_zero(m));
        const double delta = q[b] ? -field[b] : field[b];
        const double sgn = q[b] ? -1.0 : 1.0;
        q[b] ^= 1u;
        energy += delta;
        for (const auto& [j, w] : adj.neighbors[b]) field[j] += sgn * w;

        if (energy <= out.ground_energy + degeneracy_tol + drift_guard) {
            const double exact = qubo_energy(inst, q);
            if (exact <= out.ground_energy + degeneracy_tol) {
                near.push_back({exact, q});
                if (exact < out.ground_energy) out.ground_energy = exact;
                if (near.size() >= 2 * max_states) prune();
            }
        }
    }
    out.evaluated = total;

    prune();
    std::sort(near.begin(), near.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    out.ground_states.reserve(near.size());
    for (auto& c : near) out.ground_states.push_back(std::move(c.second));
    return out;
}

struct DecomposedGround {
    double ground_energy = 0.0;
    Bits ground_bits;
    std::vector<std::vector<std::size_t>> components;  // global bit indices
    std::size_t largest_component = 0;
};

// Exact ground state via connected components of the coupling graph: each
// component is enumerated independently and the minima add up. Components
// larger than the cap are rejected rather than approximated.
inline DecomposedGround exact_ground_decomposed(const QuboInstance& inst,
                                                std::size_t max_component_bits = 26) {
    detail::require(inst.n_bits >= 1, "exact_ground_decomposed: empty instance");
    const std::size_t n = inst.n_bits;

    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t(0));
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const auto& t : inst.quadratic) parent[find(t.i)] = find(t.j);

    std::vector<std::vector<std::size_t>> groups(n);
    for (std::size_t b = 0; b < n; ++b) groups[find(b)].push_back(b);

    DecomposedGround out;
    out.ground_energy = inst.offset;
    out.ground_bits.assign(n, 0);
    for (auto& g : groups) {
        if (g.empty()) continue;
        if (g.size() > max_component_bits)
            throw std::runtime_error(
                "exact_ground_decomposed: component of " + std::to_string(g.size()) +
                " bits exceeds the cap of " + std::to_string(max_component_bits));

        std::vector<std::size_t> local(n, n);
        for (std::size_t k = 0; k < g.size(); ++k) local[g[k]] = k;

        QuboInstance sub;
        sub.n_bits = g.size();
        sub.code.R = 1;
        sub.linear.resize(g.size());
        for (std::size_t k = 0; k < g.size(); ++k) sub.linear[k] = inst.linear[g[k]];
        for (const auto& t : inst.quadratic)
            if (local[t.i] < n && local[t.j] < n && find(t.i) == find(g[0]))
                sub.quadratic.push_back({local[t.i], local[t.j], t.value});

        const BruteForceResult bf = brute_force(sub, max_component_bits);
        out.ground_energy += bf.ground_energy;
        const Bits& rep = bf.ground_states.front();
        for (std::size_t k = 0; k < g.size(); ++k) out.ground_bits[g[k]] = rep[k];
        out.largest_component = std::max(out.largest_component, g.size());
        out.components.push_back(std::move(g));
    }
    std::sort(out.components.begin(), out.components.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

struct SaConfig {
    std::size_t sweeps = 1000;
    double beta_start = 0.1;
    double beta_end = 10.0;
    std::size_t restarts = 100;
};

// Called after each completed sweep with the current (incremental) energy.
using SweepObserver = std::function<void(std::size_t restart, std::size_t sweep, double energy)>;

namespace detail {

inline std::string format_config(std::initializer_list<std::pair<const char*, double>> kv) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, value] : kv) {
        if (!first) os << ";";
        first = false;
        os << key << "=" << value;
    }
    return os.str();
}

template <typename RunRestart>
void run_restarts(std::size_t restarts, std::size_t n_threads, const RunRestart& run) {
    if (n_threads <= 1) {
        for (std::size_t r = 0; r < restarts; ++r) run(r);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t r = next.fetch_add(1); r < restarts; r = next.fetch_add(1)) run(r);
    };
    std::vector<std::thread> pool;
    const std::size_t spawn = std::min(n_threads, restarts);
    pool.reserve(spawn);
    for (std::size_t t = 0; t < spawn; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

}  // namespace detail

// Single-bit Metropolis annealing on a geometric inverse-temperature ramp.
// Each restart runs an independent RNG stream derived from its index, so the
// result is a pure function of (instance, config, seed) at any thread count.
// Every reported energy is recomputed exactly from the reported bits.
inline SampleSet simulated_annealing(const QuboInstance& inst, const SaConfig& cfg,
                                     std::uint64_t seed, std::size_t n_threads = 1,
                                     const SweepObserver* observer = nullptr) {
    detail::require(inst.n_bits >= 1, "simulated_annealing: empty instance");
    detail::require(cfg.sweeps >= 1 && cfg.restarts >= 1,
                    "simulated_annealing: sweeps and restarts must be positive");
    detail::require(cfg.beta_start > 0.0 && cfg.beta_end > 0.0,
                    "simulated_annealing: temperatures must be positive");

    const auto start_time = std::chrono::steady_clock::now();
    const std::size_t n = inst.n_bits;
    const detail::Adjacency adj(inst);
    const double ratio = cfg.sweeps > 1
                             ? std::pow(cfg.beta_end / cfg.beta_start, 1.0 / double(cfg.sweeps - 1))
                             : 1.0;

    std::vector<SampleRecord> results(cfg.restarts);
    auto run_restart = [&](std::size_t r) {
        std::mt19937_64 rng(derive_seed(seed, r));
        std::uniform_real_distribution<double> unif(0.0, 1.0);

        Bits q(n);
        for (auto& b : q) b = static_cast<std::uint8_t>(rng() & 1u);
        RealVector field(inst.linear);
        for (const auto& t : inst.quadratic) {
            if (q[t.j]) field[t.i] += t.value;
            if (q[t.i]) field[t.j] += t.value;
        }
        double energy = qubo_energy(inst, q);
        Bits best_bits = q;
        double best_energy = energy;

        double beta = cfg.beta_start;
        for (std::size_t s = 0; s < cfg.sweeps; ++s) {
            for (std::size_t b = 0; b < n; ++b) {
                const double delta = q[b] ? -field[b] : field[b];
                if (delta <= 0.0 || unif(rng) < std::exp(-beta * delta)) {
                    const double sgn = q[b] ? -1.0 : 1.0;
                    q[b] ^= 1u;
                    energy += delta;
                    for (const auto& [j, w] : adj.neighbors[b]) field[j] += sgn * w;
                    if (energy < best_energy) {
                        best_energy = energy;
                        best_bits = q;
                    }
                }
            }
            if (observer) (*observer)(r, s, energy);
            beta *= ratio;
        }
        results[r] = {std::move(best_bits), 0.0, 1};
        results[r].energy = qubo_energy(inst, results[r].bits);
    };
    detail::run_restarts(cfg.restarts, observer ? std::size_t(1) : n_threads, run_restart);

    SampleSet set;
    set.solver = "sa";
    set.seed = seed;
    set.config = detail::format_config({{"sweeps", double(cfg.sweeps)},
                                        {"beta_start", cfg.beta_start},
                                        {"beta_end", cfg.beta_end},
                                        {"restarts", double(cfg.restarts)}});
    set.total_count = cfg.restarts;
    set.records = merge_sample_records(std::move(results));
    set.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
    return set;
}

struct BallisticConfig {
    std::size_t steps = 400;
    double step_size = 0.5;
    double momentum_decay = 0.0;
    double coupling = 0.3;
    std::size_t restarts = 100;
};

// Momentum relaxation of the continuous surrogate q = (1 + u)/2 on the box
// [-1, 1]^n: a linearly ramped restoring force releases the walls while the
// gradient drives the coordinates toward a corner; positions are clamped with
// momentum zeroed at the walls, and the corner is read off by sign.
inline SampleSet ballistic_solve(const QuboInstance& inst, const BallisticConfig& cfg,
                                 std::uint64_t seed, std::size_t n_threads = 1) {
    detail::require(inst.n_bits >= 1, "ballistic_solve: empty instance");
    detail::require(cfg.steps >= 2, "ballistic_solve: need at least two steps");
    detail::require(cfg.step_size > 0.0, "ballistic_solve: step size must be positive");
    detail::require(cfg.momentum_decay >= 0.0 && cfg.momentum_decay < 1.0,
                    "ballistic_solve: momentum decay must lie in [0, 1)");

    const auto start_time = std::chrono::steady_clock::now();
    const std::size_t n = inst.n_bits;
    const double dt = cfg.step_size;
    const double keep = 1.0 - cfg.momentum_decay;

    std::vector<SampleRecord> results(cfg.restarts);
    auto run_restart = [&](std::size_t r) {
        std::mt19937_64 rng(derive_seed(seed, r));
        std::uniform_real_distribution<double> unif(-0.1, 0.1);

        RealVector u(n), v(n, 0.0), grad(n);
        for (auto& x : u) x = unif(rng);

        for (std::size_t s = 0; s < cfg.steps; ++s) {
            const double ramp = double(s) / double(cfg.steps - 1);
            grad = inst.linear;
            for (const auto& t : inst.quadratic) {
                grad[t.i] += t.value * 0.5 * (1.0 + u[t.j]);
                grad[t.j] += t.value * 0.5 * (1.0 + u[t.i]);
            }
            for (std::size_t b = 0; b < n; ++b) {
                v[b] = keep * (v[b] + dt * (-(1.0 - ramp) * u[b] - cfg.coupling * 0.5 * grad[b]));
                u[b] += dt * v[b];
                if (u[b] > 1.0) {
                    u[b] = 1.0;
                    v[b] = 0.0;
                } else if (u[b] < -1.0) {
                    u[b] = -1.0;
                    v[b] = 0.0;
                }
            }
        }

        Bits q(n);
        for (std::size_t b = 0; b < n; ++b) q[b] = u[b] > 0.0 ? 1 : 0;
        results[r] = {std::move(q), 0.0, 1};
        results[r].energy = qubo_energy(inst, results[r].bits);
    };
    detail::run_restarts(cfg.restarts, n_threads, run_restart);

    SampleSet set;
    set.solver = "ballistic";
    set.seed = seed;
    set.config = detail::format_config({{"steps", double(cfg.steps)},
                                        {"step_size", cfg.step_size},
                                        {"momentum_decay", cfg.momentum_decay},
                                        {"coupling", cfg.coupling},
                                        {"restarts", double(cfg.restarts)}});
    set.total_count = cfg.restarts;
    set.records = merge_sample_records(std::move(results));
    set.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
    return set;
}

// Exhaustive search packaged as a sample set: every ground state once.
inline SampleSet brute_force_samples(const QuboInstance& inst, std::size_t max_bits = 30) {
    const auto start_time = std::chrono::steady_clock::now();
    const BruteForceResult bf = brute_force(inst, max_bits);
    SampleSet set;
    set.solver = "bruteforce";
    set.config = detail::format_config({{"max_bits", double(max_bits)}});
    std::vector<SampleRecord> records;
    records.reserve(bf.ground_states.size());
    for (const auto& bits : bf.ground_states) records.push_back({bits, bf.ground_energy, 1});
    set.total_count = records.size();
    set.records = merge_sample_records(std::move(records));
    set.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
    return set;
}

}  // namespace paraqube
