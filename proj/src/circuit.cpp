#include "mipt/circuit.hpp"

#include <atomic>
#include <chrono>
#include <stdexcept>
#include <thread>

namespace mipt {

CircuitConfig CircuitConfig::with_defaults() const {
    CircuitConfig c = *this;
    if (c.burnin_steps == 0) c.burnin_steps = 4 * c.L;
    if (c.sample_interval == 0) c.sample_interval = 2 * c.L;
    if (c.cut.region_len == 0) c.cut = CutSpec{0, c.L / 2};
    return c;
}

void CircuitConfig::validate() const {
    if (L < 2 || L % 2 != 0) throw std::invalid_argument("L must be even and at least 2");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("measurement rate must lie in [0,1]");
    if (samples_per_trajectory == 0) throw std::invalid_argument("need at least one sample");
    if (n_trajectories == 0) throw std::invalid_argument("need at least one trajectory");
    const CircuitConfig c = with_defaults();
    if (c.burnin_steps < 1) throw std::invalid_argument("burn-in must be at least one step");
    if (c.sample_interval < 1) throw std::invalid_argument("sample interval must be positive");
    if (c.cut.region_len == 0 || c.cut.region_len >= L || c.cut.region_start >= L) {
        throw std::invalid_argument("cut must select a nonempty strict subregion");
    }
}

void apply_unitary_layer(StabilizerTableau& state, bool odd_parity, RandomStream& rng) {
    const std::size_t L = state.n_qubits();
    const std::size_t first = odd_parity ? 1 : 0;
    for (std::size_t q = first; q < first + L; q += 2) {
        const TwoQubitClifford gate = sample_uniform_two_qubit_clifford(rng);
        state.apply(gate, q % L, (q + 1) % L);
    }
}

int apply_measurement_layer(StabilizerTableau& state, double p, RandomStream& rng) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("measurement rate must lie in [0,1]");
    if (p == 0.0) return 0;
    int count = 0;
    const std::size_t L = state.n_qubits();
    for (std::size_t q = 0; q < L; ++q) {
        if (rng.bernoulli(p)) {
            state.collapse_z(q, rng);
            ++count;
        }
    }
    return count;
}

TrajectoryRecord run_trajectory(const CircuitConfig& config, std::size_t trajectory_index) {
    config.validate();
    const CircuitConfig c = config.with_defaults();

    TrajectoryRecord rec;
    rec.trajectory_index = trajectory_index;
    rec.seed = derive_seed(c.master_seed, trajectory_index);
    RandomStream rng(rec.seed);

    StabilizerTableau state(c.L);
    rec.entropies.reserve(c.samples_per_trajectory);

    const std::size_t total_steps =
        c.burnin_steps + (c.samples_per_trajectory - 1) * c.sample_interval;
    std::size_t next_sample = c.burnin_steps;
    for (std::size_t t = 0; t <= total_steps; ++t) {
        apply_unitary_layer(state, t % 2 == 1, rng);
        rec.measured_counts.push_back(apply_measurement_layer(state, c.p, rng));
        // step t completes at time t+1; first sample after burnin_steps steps
        if (t + 1 == next_sample) {
            rec.entropies.push_back(state.entanglement_entropy(c.cut));
            if (rec.entropies.size() == c.samples_per_trajectory) break;
            next_sample += c.sample_interval;
        }
    }
    return rec;
}

std::vector<TrajectoryRecord> run_ensemble_range(const CircuitConfig& config, std::size_t begin,
                                                 std::size_t end, unsigned n_threads) {
    if (end < begin) throw std::invalid_argument("bad trajectory range");
    std::vector<TrajectoryRecord> out(end - begin);
    if (out.empty()) return out;
    if (n_threads == 0) n_threads = 1;
    n_threads = std::min<std::size_t>(n_threads, out.size());

    std::atomic<std::size_t> next{begin};
    auto worker = [&] {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= end) return;
            out[idx - begin] = run_trajectory(config, idx);
        }
    };
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return out;
}

EnsembleResult run_ensemble(const CircuitConfig& config, unsigned n_threads) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();
    EnsembleResult res;
    res.config = config;
    res.records = run_ensemble_range(config, 0, config.n_trajectories, n_threads);
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

std::vector<int> entropy_step_series(std::size_t L, double p, std::size_t steps,
                                     std::uint64_t seed) {
    RandomStream rng(seed);
    StabilizerTableau state(L);
    const CutSpec cut{0, L / 2};
    std::vector<int> series;
    series.reserve(steps + 1);
    series.push_back(state.entanglement_entropy(cut));
    for (std::size_t t = 0; t < steps; ++t) {
        apply_unitary_layer(state, t % 2 == 1, rng);
        apply_measurement_layer(state, p, rng);
        series.push_back(state.entanglement_entropy(cut));
    }
    return series;
}

GrowthCalibration unitary_growth_calibration(std::size_t L, std::size_t window_lo,
                                             std::size_t window_hi, std::size_t n_runs,
                                             std::uint64_t seed) {
    if (window_hi <= window_lo) throw std::invalid_argument("empty calibration window");
    GrowthCalibration cal;
    // Light-cone bound: the half-chain entropy saturates after about L/4
    // layers at roughly 2 bits per layer through two domain walls.
    if (window_hi > L / 4 + 2) cal.window_warning = true;

    double sum = 0.0, sum2 = 0.0;
    std::size_t n = 0;
    for (std::size_t run = 0; run < n_runs; ++run) {
        const auto series = entropy_step_series(L, 0.0, window_hi, derive_seed(seed, run));
        for (std::size_t t = window_lo; t < window_hi; ++t) {
            const double ds = static_cast<double>(series[t + 1] - series[t]);
            sum += ds;
            sum2 += ds * ds;
            ++n;
        }
    }
    cal.n_samples = n;
    if (n > 0) cal.mu_u = sum / static_cast<double>(n);
    if (n > 1) {
        cal.nu_u = (sum2 - sum * sum / static_cast<double>(n)) / static_cast<double>(n - 1);
    }
    return cal;
}

}  // namespace mipt
