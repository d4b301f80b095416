// Brickwork hybrid-circuit driver: alternating unitary/measurement layers with
// periodic boundaries, burn-in, a fixed sampling schedule, and deterministic
// trajectory-parallel ensembles.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mipt/tableau.hpp"

namespace mipt {

struct CircuitConfig {
    std::size_t L = 0;                      // even number of qubits
    double p = 0.0;                         // per-qubit per-step measurement rate
    std::size_t burnin_steps = 0;           // defaults to 4L when 0
    std::size_t samples_per_trajectory = 4;
    std::size_t sample_interval = 0;        // defaults to 2L when 0
    std::size_t n_trajectories = 1;
    std::uint64_t master_seed = 0;
    CutSpec cut{0, 0};                      // region_len 0 selects the half chain

    CircuitConfig with_defaults() const;
    void validate() const;  // throws std::invalid_argument with a message
};

struct TrajectoryRecord {
    std::size_t trajectory_index = 0;
    std::uint64_t seed = 0;
    std::vector<int> entropies;       // one per sample time, bits
    std::vector<int> measured_counts; // qubits measured per step, diagnostic
};

struct EnsembleResult {
    CircuitConfig config;
    std::vector<TrajectoryRecord> records;
    double wall_seconds = 0.0;
};

// One brickwork unitary layer; even parity couples (0,1),(2,3),..., odd parity
// couples (1,2),(3,4),...,(L-1,0).
void apply_unitary_layer(StabilizerTableau& state, bool odd_parity, RandomStream& rng);

// Each qubit is measured in Z independently with probability p; returns how
// many were measured.
int apply_measurement_layer(StabilizerTableau& state, double p, RandomStream& rng);

// Deterministic function of (config, trajectory_index): seeds a dedicated
// stream, evolves unitary-then-measure steps, records entropy on the schedule.
TrajectoryRecord run_trajectory(const CircuitConfig& config, std::size_t trajectory_index);

// Runs trajectories [begin, end) on n_threads workers. Results depend only on
// the config and index range, never on scheduling.
std::vector<TrajectoryRecord> run_ensemble_range(const CircuitConfig& config, std::size_t begin,
                                                 std::size_t end, unsigned n_threads);

EnsembleResult run_ensemble(const CircuitConfig& config, unsigned n_threads = 1);

// Per-step half-chain entropy trace S_0, S_1, ..., S_steps for one seeded run.
std::vector<int> entropy_step_series(std::size_t L, double p, std::size_t steps,
                                     std::uint64_t seed);

struct GrowthCalibration {
    double mu_u = 0.0;      // mean entropy gain per unitary layer, bits
    double nu_u = 0.0;      // variance of the per-layer gain
    std::size_t n_samples = 0;
    bool window_warning = false;  // window extends past the linear-growth regime
};

// Mean and variance of the per-step entropy change in unitary-only (p = 0)
// circuits over the step window [window_lo, window_hi).
GrowthCalibration unitary_growth_calibration(std::size_t L, std::size_t window_lo,
                                             std::size_t window_hi, std::size_t n_runs,
                                             std::uint64_t seed);

}  // namespace mipt
