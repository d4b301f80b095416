// Theory-side distributions: the Tracy-Widom GUE law for the DPRE picture of
// the volume-law phase, and the coarse-grained Bell-pair stochastic model with
// its Fokker-Planck stationary solution for the area-law phase.
#pragma once

#include <cstdint>
#include <vector>

#include "mipt/rng.hpp"
#include "mipt/stats.hpp"

namespace mipt {

// A continuous density sampled on an increasing grid; linear off-grid reads
// are zero.
struct DensityCurve {
    std::vector<double> s;
    std::vector<double> density;
};

struct TwTable {
    std::vector<double> grid;  // xi abscissae, increasing
    std::vector<double> pdf;
    std::vector<double> cdf;
    double mean_xi = 0.0;
    double var_xi = 0.0;
    double skew_xi = 0.0;
    bool from_fallback = false;  // embedded table used because the ODE solve failed

    double pdf_at(double xi) const;  // local cubic, clamped at 0
    double cdf_at(double xi) const;
    double sample(double u01) const;  // inverse CDF
};

// Tracy-Widom GUE (beta = 2) on xi in [-10, 6]: Hastings-McLeod solution of
// Painleve II integrated from the Airy asymptotics, F2 via the standard
// integral representation, pdf = F2 * integral of q^2.
TwTable build_tw_gue_table();

struct DpreParams {
    double s0 = 0.0;   // bits per site
    double s1 = 0.0;   // bits per site^{1/3}
    std::size_t L_A = 0;
};

// s1 = sqrt(Var[S] / (Var[xi] L_A^{2/3})), s0 = <S>/L_A + s1 <xi> L_A^{-2/3}.
DpreParams fit_dpre_params(double mean_s, double var_s, std::size_t L_A, const TwTable& tw);

// Change of variables through S = s0 L_A - s1 L_A^{1/3} xi.
DensityCurve dpre_predicted_density(const DpreParams& params, const TwTable& tw);

// IoD = s1^2 L_A^{1/3} Var[xi] / (s0 L_A^{2/3} - s1 <xi>).
double dpre_predicted_iod(const DpreParams& params, const TwTable& tw);

// ---- Coarse-grained area-law model ----

// Probability that a measurement layer destroys at least one qubit of a given
// Bell pair: exact combinatorial form [C(L,N) - C(L-2,N)] / C(L,N).
double fp_q_exact(std::size_t L, std::size_t n_measured);
double fp_q_exact_rate(std::size_t L, double p);  // N = round(pL)
double fp_q_asymptotic(double p);                 // 1 - (1-p)^2

// Two-distinct-pair destruction probability
// [C(L,N) - 2 C(L-2,N) + C(L-4,N)] / C(L,N), and its covariance r - q^2 with
// the large-L check -4p(1-p)^3/L.
double fp_r(std::size_t L, std::size_t n_measured);
double fp_r_minus_q2(std::size_t L, std::size_t n_measured);
double fp_r_minus_q2_asymptotic(double p, std::size_t L);

struct CQuadratic {
    double c2 = 0.0, c1 = 0.0, c0 = 0.0;
    double eval(double q) const { return (c2 * q + c1) * q + c0; }
};

// c = 0.3285 q^2 - 0.4536 q + 0.1239.
CQuadratic paper_c_quadratic();
double fp_c(double q);

// Least-squares quadratic through (q, c) points; needs >= 3 distinct q.
CQuadratic fit_c_quadratic(const std::vector<std::pair<double, double>>& points);

// Conditional-variance regression of a per-step entropy series against
// S(S-1), after removing the nu + q(1-q)S part.
double estimate_c_from_series(const std::vector<int>& series, double mu, double nu, double q);

struct FpModel {
    double mu_u = 0.0;  // mean entropy gain per unitary layer, bits
    double nu_u = 0.0;  // variance of that gain
    double p = 0.0;     // measurement rate
    double q = 0.0;     // pair-destruction probability
    double c = 0.0;     // covariance surrogate replacing r - q^2

    double alpha() const { return q * (1.0 - q); }
};

struct ConditionalMoments {
    double a = 0.0;  // drift <dS | S>
    double b = 0.0;  // diffusion Var(dS | S)
};

// a(S) = mu - qS, b(S) = nu + q(1-q)S + cS(S-1); throws std::domain_error when
// b(s) <= 0 (parameters outside the physical regime).
ConditionalMoments fp_conditional_moments(const FpModel& model, double s);

struct FpStationary {
    std::vector<double> s_grid;
    std::vector<double> density;   // normalized to unit integral
    double tail_fraction = 0.0;    // density(s_max) / peak
    bool grid_extended = false;    // s_max was grown to push the tail down
};

// Zero-flux steady state P(S) ~ (1/b) exp(int 2a/b), evaluated by quadrature
// on [0, s_max] and normalized by the trapezoid rule. The grid is extended
// until the tail is below 1e-12 of the peak.
FpStationary fp_stationary(const FpModel& model, double s_max, std::size_t n_grid);

// Direct simulation oracle for the c = 0 sector: sigma_U ~ Gaussian(mu, nu),
// sigma_M ~ Binomial(round(S), q), S clipped at zero. Returned values are the
// post-burn-in states rounded to bins.
EntropySamples simulate_coarse_model(const FpModel& model, std::size_t steps,
                                     std::size_t burnin, RandomStream& rng);

}  // namespace mipt
