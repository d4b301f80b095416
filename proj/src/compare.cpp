#include "mipt/compare.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace mipt {

namespace {

// Integral of the piecewise-linear density over [a, b]; zero outside the grid.
double integrate_linear(const DensityCurve& c, double a, double b) {
    if (c.s.size() < 2) return 0.0;
    a = std::max(a, c.s.front());
    b = std::min(b, c.s.back());
    if (b <= a) return 0.0;
    const auto& xs = c.s;
    const auto& ys = c.density;
    const auto value_at = [&](std::size_t seg, double x) {
        const double t = (x - xs[seg]) / (xs[seg + 1] - xs[seg]);
        return ys[seg] + t * (ys[seg + 1] - ys[seg]);
    };
    std::size_t seg =
        static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), a) - xs.begin());
    seg = (seg == 0) ? 0 : seg - 1;
    seg = std::min(seg, xs.size() - 2);
    double acc = 0.0;
    double x0 = a, f0 = value_at(seg, a);
    while (x0 < b) {
        const double x1 = std::min(b, xs[seg + 1]);
        const double f1 = value_at(seg, x1);
        acc += 0.5 * (f0 + f1) * (x1 - x0);
        x0 = x1;
        f0 = f1;
        if (x0 >= b || seg + 2 >= xs.size()) break;
        ++seg;
    }
    return acc;
}

}  // namespace

AlignedPair align(const EntropyDistribution& data, const DensityCurve& model_density,
                  double epsilon) {
    if (data.total == 0) throw std::invalid_argument("empty data distribution");
    if (model_density.s.size() != model_density.density.size() || model_density.s.size() < 2) {
        throw std::invalid_argument("model density needs a sampled grid");
    }

    AlignedPair pair;
    pair.epsilon = epsilon;
    double model_in_bins = 0.0;
    for (const auto& [value, count] : data.counts) {
        if (value < 0) throw std::invalid_argument("negative entropy in data support");
        pair.support.push_back(value);
        pair.p_data.push_back(static_cast<double>(count) / static_cast<double>(data.total));
        const double lo = (value == 0) ? 0.0 : static_cast<double>(value) - 0.5;
        const double hi = static_cast<double>(value) + 0.5;
        const double mass = integrate_linear(model_density, lo, hi);
        model_in_bins += mass;
        pair.q_model.push_back(std::max(mass, epsilon));
    }
    pair.leakage = std::max(0.0, 1.0 - model_in_bins);
    pair.leakage_warning = pair.leakage > 0.05;

    double qsum = 0.0;
    for (double q : pair.q_model) qsum += q;
    for (double& q : pair.q_model) q /= qsum;
    return pair;
}

double kl_divergence(const AlignedPair& pair) {
    double kl = 0.0;
    for (std::size_t i = 0; i < pair.support.size(); ++i) {
        const double p = pair.p_data[i];
        if (p <= 0.0) continue;
        kl += p * std::log(p / pair.q_model[i]);
    }
    assert(kl > -1e-9 && "Gibbs inequality violated");
    return std::max(kl, 0.0);
}

}  // namespace mipt
