// Moment statistics of entropy ensembles: histograms, mean / variance / IoD /
// skewness, and trajectory-block bootstrap error bars.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mipt/circuit.hpp"

namespace mipt {

struct EntropySamples {
    std::vector<int> values;  // bits
    // Trajectory boundaries as offsets into values ({0, n1, n1+n2, ...}).
    // Empty means i.i.d. samples; the bootstrap then resamples single values.
    std::vector<std::size_t> trajectory_offsets;
    std::size_t L = 0;
    double p = 0.0;
    std::string provenance;

    std::size_t n_trajectories() const {
        return trajectory_offsets.empty() ? values.size() : trajectory_offsets.size() - 1;
    }
};

EntropySamples samples_from_ensemble(const EnsembleResult& ensemble);

struct EntropyDistribution {
    std::map<int, std::uint64_t> counts;
    std::uint64_t total = 0;
};

EntropyDistribution histogram(const EntropySamples& samples);

struct MomentSummary {
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0;  // bias-corrected, divisor n-1
    std::optional<double> iod;       // undefined when mean == 0
    std::optional<double> skewness;  // undefined when variance == 0
    double se_mean = 0.0, se_variance = 0.0, se_iod = 0.0, se_skewness = 0.0;
};

// Two-pass central moments; skewness is the population formula with the
// adjusted Fisher-Pearson small-sample factor. Bootstrap errors resample whole
// trajectories so within-trajectory correlation cannot shrink the bars.
MomentSummary moments(const EntropySamples& samples, std::size_t n_bootstrap = 1000,
                      std::uint64_t seed = 0);

struct SweepRow {
    std::size_t L = 0;
    double p = 0.0;
    MomentSummary summary;
};

struct SweepTable {
    std::vector<SweepRow> rows;          // sorted by (L, p)
    std::vector<std::string> notices;    // e.g. merged duplicate cells
};

SweepTable sweep_moments(const std::vector<EnsembleResult>& results,
                         std::size_t n_bootstrap = 1000, std::uint64_t seed = 0);

}  // namespace mipt
