#include <cmath>
#include <stdexcept>

#include "mipt/models.hpp"

namespace mipt {

DpreParams fit_dpre_params(double mean_s, double var_s, std::size_t L_A, const TwTable& tw) {
    if (var_s <= 0.0) throw std::domain_error("DPRE fit needs positive entropy variance");
    if (L_A < 2) throw std::domain_error("DPRE fit needs L_A >= 2");
    const double la = static_cast<double>(L_A);
    DpreParams out;
    out.L_A = L_A;
    out.s1 = std::sqrt(var_s / (tw.var_xi * std::pow(la, 2.0 / 3.0)));
    out.s0 = mean_s / la + out.s1 * tw.mean_xi * std::pow(la, -2.0 / 3.0);
    return out;
}

DensityCurve dpre_predicted_density(const DpreParams& params, const TwTable& tw) {
    const double la = static_cast<double>(params.L_A);
    const double scale = params.s1 * std::cbrt(la);
    const double offset = params.s0 * la;
    // S = offset - scale * xi is decreasing in xi, so walk the xi grid backwards.
    DensityCurve curve;
    curve.s.reserve(tw.grid.size());
    curve.density.reserve(tw.grid.size());
    for (auto it = tw.grid.rbegin(); it != tw.grid.rend(); ++it) {
        const double xi = *it;
        curve.s.push_back(offset - scale * xi);
        curve.density.push_back(tw.pdf_at(xi) / scale);
    }
    return curve;
}

double dpre_predicted_iod(const DpreParams& params, const TwTable& tw) {
    const double la = static_cast<double>(params.L_A);
    const double denom = params.s0 * std::pow(la, 2.0 / 3.0) - params.s1 * tw.mean_xi;
    if (denom <= 0.0) throw std::domain_error("DPRE IoD denominator must be positive");
    return params.s1 * params.s1 * std::cbrt(la) * tw.var_xi / denom;
}

}  // namespace mipt
