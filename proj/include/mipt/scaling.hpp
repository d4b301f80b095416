// Critical-point analysis: finite-size-scaling collapse, the area-law skewness
// power law, the auxiliary tanh-crossover fit, and derivative/peak utilities.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace mipt {

struct CurvePoint {
    std::size_t L = 0;
    double p = 0.0;
    double mean = 0.0;
    double se = 0.0;
};

struct ScalingFit {
    double p_c = 0.0;
    double nu = 0.0;
    double objective = 0.0;  // RMS residual about the local-linear master curve
    double p_c_lo = 0.0, p_c_hi = 0.0;
    double nu_lo = 0.0, nu_hi = 0.0;
    std::size_t grid_evaluations = 0;
};

// Grid search plus local refinement of |<S(p)> - <S(p_c)>| = F[(p-p_c)L^{1/nu}].
// <S(p_c)> per size comes from monotone cubic interpolation; the master curve
// is a local linear fit with bandwidth 10% of the x-range.
ScalingFit fss_collapse(const std::vector<CurvePoint>& curves, double p_c_lo, double p_c_hi,
                        double nu_lo, double nu_hi);

struct SkewPoint {
    double p = 0.0;
    double skew = 0.0;
    double se = 0.0;
};

struct PowerLawFit {
    double amplitude = 0.0;
    double exponent = 0.0;
    double se_amplitude = 0.0;
    double se_exponent = 0.0;
    std::size_t n_used = 0;
    std::size_t n_excluded = 0;  // non-positive skewness points dropped
};

// Weighted least squares of log(skew) against log(p) for p >= p_min_fit.
PowerLawFit fit_area_power_law(const std::vector<SkewPoint>& points, double p_min_fit);

struct SkewnessFit {
    double b0 = 0.0, b1 = 0.0, b2 = 0.0;
    double amplitude = 0.0, exponent = 0.0;  // fixed power-law part
    double p_max = 0.0;                      // argmax of d(gamma)/dp of the fit
    double fwhm = 0.0;                       // width of that derivative peak
    std::array<std::array<double, 3>, 3> covariance{};
    double objective = 0.0;
    bool fwhm_clipped = false;  // a half-max crossing fell outside the data range
};

// gamma(p) = A p^beta + b0 [tanh(b1 (p - b2)) - 1], least squares over
// (b0, b1, b2) with Nelder-Mead multi-starts.
SkewnessFit fit_skewness_aux(const std::vector<SkewPoint>& points, double amplitude,
                             double exponent);

// Central differences inside, one-sided at the ends; grid must be strictly
// increasing with at least 3 points.
std::vector<double> numeric_derivative(const std::vector<double>& xs,
                                       const std::vector<double>& ys);

// Monotone cubic (Fritsch-Carlson) interpolant.
class PchipInterpolant {
  public:
    PchipInterpolant(std::vector<double> xs, std::vector<double> ys);
    double operator()(double x) const;

  private:
    std::vector<double> xs_, ys_, slopes_;
};

}  // namespace mipt
