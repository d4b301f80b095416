// Model-vs-data comparison: continuous densities binned onto the integer
// entropy support, then discrete KL divergence.
#pragma once

#include <vector>

#include "mipt/models.hpp"
#include "mipt/stats.hpp"

namespace mipt {

struct AlignedPair {
    std::vector<int> support;      // data support, ascending
    std::vector<double> p_data;    // empirical pmf
    std::vector<double> q_model;   // model pmf on the same support, floored
    double epsilon = 0.0;
    double leakage = 0.0;          // model mass outside the data support
    bool leakage_warning = false;  // leakage above 5%
};

// Integrates the model density over unit bins centered on each integer of the
// data support ([0, 1/2] for k = 0), floors each bin at epsilon, renormalizes.
AlignedPair align(const EntropyDistribution& data, const DensityCurve& model_density,
                  double epsilon = 1e-12);

// D(P || Q) = sum_{P > 0} P log(P/Q), in nats.
double kl_divergence(const AlignedPair& pair);

}  // namespace mipt
