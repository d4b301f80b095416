#include "mipt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mipt/rng.hpp"

namespace mipt {

namespace {

struct RawMoments {
    std::size_t n = 0;
    double mean = 0.0, variance = 0.0;
    std::optional<double> iod, skewness;
};

RawMoments raw_moments(const std::vector<int>& values) {
    RawMoments m;
    m.n = values.size();
    if (m.n == 0) return m;
    double sum = 0.0;
    for (int v : values) sum += v;
    m.mean = sum / static_cast<double>(m.n);
    if (m.n < 2) return m;

    double m2 = 0.0, m3 = 0.0;
    for (int v : values) {
        const double d = static_cast<double>(v) - m.mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    const double n = static_cast<double>(m.n);
    m.variance = m2 / (n - 1.0);
    if (m.mean > 0.0) m.iod = m.variance / m.mean;
    if (m2 > 0.0 && m.n >= 3) {
        const double g1 = (m3 / n) / std::pow(m2 / n, 1.5);
        m.skewness = g1 * std::sqrt(n * (n - 1.0)) / (n - 2.0);
    }
    return m;
}

}  // namespace

EntropySamples samples_from_ensemble(const EnsembleResult& ensemble) {
    EntropySamples s;
    s.L = ensemble.config.L;
    s.p = ensemble.config.p;
    s.trajectory_offsets.push_back(0);
    for (const TrajectoryRecord& rec : ensemble.records) {
        s.values.insert(s.values.end(), rec.entropies.begin(), rec.entropies.end());
        s.trajectory_offsets.push_back(s.values.size());
    }
    return s;
}

EntropyDistribution histogram(const EntropySamples& samples) {
    if (samples.values.empty()) throw std::invalid_argument("histogram of an empty sample");
    EntropyDistribution d;
    for (int v : samples.values) {
        ++d.counts[v];
        ++d.total;
    }
    return d;
}

MomentSummary moments(const EntropySamples& samples, std::size_t n_bootstrap, std::uint64_t seed) {
    if (samples.values.empty()) throw std::invalid_argument("moments of an empty sample");
    const RawMoments base = raw_moments(samples.values);

    MomentSummary out;
    out.n = base.n;
    out.mean = base.mean;
    out.variance = base.variance;
    out.iod = base.iod;
    out.skewness = base.skewness;
    if (n_bootstrap == 0 || base.n < 2) return out;

    // Resample whole trajectories (single values when no grouping is known).
    const bool grouped = samples.trajectory_offsets.size() > 1;
    const std::size_t n_groups =
        grouped ? samples.trajectory_offsets.size() - 1 : samples.values.size();

    RandomStream rng(derive_seed(seed, 0x626f6f74));
    std::vector<int> resampled;
    resampled.reserve(samples.values.size());
    std::vector<double> bs_mean, bs_var, bs_iod, bs_skew;
    bs_mean.reserve(n_bootstrap);
    for (std::size_t b = 0; b < n_bootstrap; ++b) {
        resampled.clear();
        for (std::size_t g = 0; g < n_groups; ++g) {
            const std::size_t pick = rng.uniform_index(n_groups);
            if (grouped) {
                const std::size_t lo = samples.trajectory_offsets[pick];
                const std::size_t hi = samples.trajectory_offsets[pick + 1];
                for (std::size_t i = lo; i < hi; ++i) resampled.push_back(samples.values[i]);
            } else {
                resampled.push_back(samples.values[pick]);
            }
        }
        const RawMoments m = raw_moments(resampled);
        bs_mean.push_back(m.mean);
        bs_var.push_back(m.variance);
        if (m.iod) bs_iod.push_back(*m.iod);
        if (m.skewness) bs_skew.push_back(*m.skewness);
    }

    auto stddev = [](const std::vector<double>& v) {
        if (v.size() < 2) return 0.0;
        double s = 0.0;
        for (double x : v) s += x;
        const double mean = s / static_cast<double>(v.size());
        double acc = 0.0;
        for (double x : v) acc += (x - mean) * (x - mean);
        return std::sqrt(acc / static_cast<double>(v.size() - 1));
    };
    out.se_mean = stddev(bs_mean);
    out.se_variance = stddev(bs_var);
    if (out.iod) out.se_iod = stddev(bs_iod);
    if (out.skewness) out.se_skewness = stddev(bs_skew);
    return out;
}

SweepTable sweep_moments(const std::vector<EnsembleResult>& results, std::size_t n_bootstrap,
                         std::uint64_t seed) {
    SweepTable table;
    std::map<std::pair<std::size_t, double>, EntropySamples> cells;
    for (const EnsembleResult& r : results) {
        if (r.records.empty()) throw std::invalid_argument("sweep_moments: empty ensemble");
        const auto key = std::make_pair(r.config.L, r.config.p);
        EntropySamples add = samples_from_ensemble(r);
        auto it = cells.find(key);
        if (it == cells.end()) {
            cells.emplace(key, std::move(add));
        } else {
            std::ostringstream os;
            os << "merged duplicate cell L=" << key.first << " p=" << key.second;
            table.notices.push_back(os.str());
            EntropySamples& dst = it->second;
            const std::size_t base = dst.values.size();
            dst.values.insert(dst.values.end(), add.values.begin(), add.values.end());
            for (std::size_t k = 1; k < add.trajectory_offsets.size(); ++k) {
                dst.trajectory_offsets.push_back(base + add.trajectory_offsets[k]);
            }
        }
    }
    for (const auto& [key, samples] : cells) {
        table.rows.push_back({key.first, key.second, moments(samples, n_bootstrap, seed)});
    }
    return table;
}

}  // namespace mipt
