#include <cmath>

#include "doctest.h"
#include "mipt/compare.hpp"
#include "mipt/models.hpp"

using namespace mipt;

namespace {

const TwTable& tw() {
    static const TwTable table = build_tw_gue_table();
    return table;
}

// Trapezoid moments of a density curve.
void curve_moments(const DensityCurve& c, double& norm, double& mean, double& var, double& skew) {
    norm = mean = 0.0;
    for (std::size_t i = 1; i < c.s.size(); ++i) {
        const double h = c.s[i] - c.s[i - 1];
        norm += 0.5 * h * (c.density[i] + c.density[i - 1]);
        mean += 0.5 * h * (c.s[i] * c.density[i] + c.s[i - 1] * c.density[i - 1]);
    }
    mean /= norm;
    double m2 = 0.0, m3 = 0.0;
    for (std::size_t i = 1; i < c.s.size(); ++i) {
        const double h = c.s[i] - c.s[i - 1];
        const double d1 = c.s[i] - mean, d0 = c.s[i - 1] - mean;
        m2 += 0.5 * h * (d1 * d1 * c.density[i] + d0 * d0 * c.density[i - 1]);
        m3 += 0.5 * h * (d1 * d1 * d1 * c.density[i] + d0 * d0 * d0 * c.density[i - 1]);
    }
    var = m2 / norm;
    skew = (m3 / norm) / std::pow(var, 1.5);
}

}  // namespace

TEST_SUITE("models") {

TEST_CASE("tracy-widom table reproduces the GUE constants") {
    const TwTable& t = tw();
    CHECK_FALSE(t.from_fallback);
    CHECK(std::abs(t.mean_xi - (-1.771)) < 1e-3);
    CHECK(std::abs(t.var_xi - 0.8132) < 1e-3);
    CHECK(std::abs(t.skew_xi - 0.224) < 1e-3);

    // pdf integrates to one, cdf is monotone from 0 to 1
    double norm = 0.0;
    for (std::size_t i = 1; i < t.grid.size(); ++i) {
        norm += 0.5 * (t.pdf[i] + t.pdf[i - 1]) * (t.grid[i] - t.grid[i - 1]);
        CHECK(t.cdf[i] >= t.cdf[i - 1] - 1e-12);
        CHECK(t.pdf[i] >= 0.0);
    }
    CHECK(std::abs(norm - 1.0) < 1e-6);
    CHECK(t.cdf.front() < 1e-9);
    CHECK(t.cdf.back() > 1.0 - 1e-6);
}

TEST_CASE("tracy-widom interpolation and sampling") {
    const TwTable& t = tw();
    // pdf peak is near -1.77 and interpolation is smooth between nodes
    const double mid = 0.5 * (t.grid[100] + t.grid[101]);
    const double approx = 0.5 * (t.pdf[100] + t.pdf[101]);
    CHECK(std::abs(t.pdf_at(mid) - approx) < 1e-4);

    RandomStream rng(808);
    double acc = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) acc += t.sample(rng.u01());
    CHECK(std::abs(acc / n - t.mean_xi) < 0.01);
}

TEST_CASE("dpre parameter fit round-trips") {
    const TwTable& t = tw();
    const double s0 = 0.31, s1 = 0.71;
    const std::size_t la = 256;
    const double mean_s = s0 * la - s1 * std::cbrt(static_cast<double>(la)) * t.mean_xi;
    const double var_s = s1 * s1 * std::pow(static_cast<double>(la), 2.0 / 3.0) * t.var_xi;
    const DpreParams fit = fit_dpre_params(mean_s, var_s, la, t);
    CHECK(fit.s1 == doctest::Approx(s1).epsilon(1e-12));
    CHECK(fit.s0 == doctest::Approx(s0).epsilon(1e-10));

    // homogeneity: scaling the variance by 4 doubles s1
    const DpreParams fit2 = fit_dpre_params(mean_s, 4.0 * var_s, la, t);
    CHECK(fit2.s1 == doctest::Approx(2.0 * s1).epsilon(1e-12));

    CHECK_THROWS_AS(fit_dpre_params(10.0, 0.0, la, t), std::domain_error);
    CHECK_THROWS_AS(fit_dpre_params(10.0, 1.0, 1, t), std::domain_error);
}

TEST_CASE("dpre density: normalization, mean, sign-flipped skewness") {
    const TwTable& t = tw();
    const DpreParams params{0.31, 0.71, 256};
    const DensityCurve c = dpre_predicted_density(params, t);
    double norm, mean, var, skew;
    curve_moments(c, norm, mean, var, skew);
    CHECK(std::abs(norm - 1.0) < 1e-6);
    const double la = 256.0;
    CHECK(mean == doctest::Approx(params.s0 * la - params.s1 * std::cbrt(la) * t.mean_xi)
                      .epsilon(1e-6));
    CHECK(skew == doctest::Approx(-t.skew_xi).epsilon(1e-3));
}

TEST_CASE("dpre iod matches density moments and limits") {
    const TwTable& t = tw();
    const DpreParams params{0.31, 0.71, 256};
    const double iod = dpre_predicted_iod(params, t);
    const DensityCurve c = dpre_predicted_density(params, t);
    double norm, mean, var, skew;
    curve_moments(c, norm, mean, var, skew);
    CHECK(iod == doctest::Approx(var / mean).epsilon(1e-4));

    const DpreParams tiny{0.31, 1e-6, 256};
    CHECK(dpre_predicted_iod(tiny, t) < 1e-9);
}

TEST_CASE("pair-destruction probability q") {
    CHECK(fp_q_asymptotic(0.0) == 0.0);
    CHECK(fp_q_asymptotic(1.0) == 1.0);
    CHECK(fp_q_asymptotic(0.5) == doctest::Approx(0.75));
    CHECK(fp_q_exact(100, 0) == 0.0);
    CHECK(fp_q_exact(100, 100) == 1.0);
    CHECK(fp_q_exact(1000, 500) == doctest::Approx(0.75).epsilon(1e-3));
    CHECK(std::abs(fp_q_exact(1000, 500) - 0.75) < 1.0 / 1000.0);
    CHECK_THROWS_AS(fp_q_exact(10, 11), std::domain_error);

    // exact converges to asymptotic as 1/L at fixed rate
    const double p = 0.3;
    double prev = 1.0;
    for (std::size_t L : {100, 200, 400, 800}) {
        const double diff = std::abs(fp_q_exact_rate(L, p) - fp_q_asymptotic(p));
        CHECK(diff < 2.0 / static_cast<double>(L));
        CHECK(diff < prev);
        prev = diff;
    }
}

TEST_CASE("two-pair probability r and its covariance") {
    CHECK(fp_r(200, 0) == 0.0);
    CHECK(fp_r(200, 200) == doctest::Approx(1.0));
    const double rm = fp_r_minus_q2(200, 20);
    const double asym = fp_r_minus_q2_asymptotic(0.1, 200);
    CHECK(std::abs(rm - asym) < 0.2 * std::abs(asym));
}

TEST_CASE("c quadratic: paper pin and refit") {
    CHECK(fp_c(0.0) == doctest::Approx(0.1239));
    CHECK(fp_c(1.0) == doctest::Approx(-0.0012));

    const CQuadratic truth{0.21, -0.33, 0.09};
    std::vector<std::pair<double, double>> pts;
    for (double q = 0.05; q < 0.95; q += 0.07) pts.push_back({q, truth.eval(q)});
    const CQuadratic fit = fit_c_quadratic(pts);
    CHECK(fit.c2 == doctest::Approx(truth.c2).epsilon(1e-9));
    CHECK(fit.c1 == doctest::Approx(truth.c1).epsilon(1e-9));
    CHECK(fit.c0 == doctest::Approx(truth.c0).epsilon(1e-9));
}

TEST_CASE("conditional moments of the coarse model") {
    FpModel m;
    m.mu_u = 1.0;
    m.nu_u = 0.5;
    m.q = 0.36;
    m.c = 0.0;
    const auto at0 = fp_conditional_moments(m, 0.0);
    CHECK(at0.a == doctest::Approx(1.0));
    CHECK(at0.b == doctest::Approx(0.5));
    const auto fixed = fp_conditional_moments(m, m.mu_u / m.q);
    CHECK(fixed.a == doctest::Approx(0.0));
    const auto at10 = fp_conditional_moments(m, 10.0);
    CHECK(at10.a == doctest::Approx(-2.6));
    CHECK(at10.b == doctest::Approx(0.5 + 0.2304 * 10.0));

    FpModel bad = m;
    bad.c = -1.0;  // drives b negative at moderate S
    CHECK_THROWS_AS(fp_conditional_moments(bad, 10.0), std::domain_error);
}

TEST_CASE("stationary solution is normalized and solves the flux ODE") {
    FpModel m;
    m.mu_u = 1.0;
    m.nu_u = 0.5;
    m.q = 0.36;
    m.c = fp_c(m.q);
    const FpStationary st = fp_stationary(m, 30.0, 2000);

    double norm = 0.0;
    const double h = st.s_grid[1] - st.s_grid[0];
    for (std::size_t i = 1; i < st.s_grid.size(); ++i) {
        norm += 0.5 * (st.density[i] + st.density[i - 1]) * h;
    }
    CHECK(std::abs(norm - 1.0) < 1e-8);

    // a P - (1/2) d(bP)/ds = 0 on the interior, residual relative to |aP|
    std::vector<double> bp(st.s_grid.size());
    for (std::size_t i = 0; i < st.s_grid.size(); ++i) {
        bp[i] = fp_conditional_moments(m, st.s_grid[i]).b * st.density[i];
    }
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < st.s_grid.size(); ++i) {
        const double dbp = (bp[i + 1] - bp[i - 1]) / (2.0 * h);
        const double ap = fp_conditional_moments(m, st.s_grid[i]).a * st.density[i];
        const double flux_scale =
            std::abs(ap) + std::abs(dbp) + 1e-12 * st.density[i] + 1e-300;
        if (st.density[i] > 1e-9) {
            worst = std::max(worst, std::abs(ap - 0.5 * dbp) / flux_scale);
        }
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("small-q stationary density approaches the OU gaussian") {
    FpModel m;
    m.mu_u = 1.0;
    m.nu_u = 0.25;
    m.q = 0.02;
    m.c = 0.0;
    const FpStationary st = fp_stationary(m, 160.0, 4000);
    // Ornstein-Uhlenbeck limit of the same ODE: mean mu/q, variance b(S*)/2q
    const double s_star = m.mu_u / m.q;
    double mean = 0.0, norm = 0.0;
    const double h = st.s_grid[1] - st.s_grid[0];
    for (std::size_t i = 0; i < st.s_grid.size(); ++i) {
        mean += st.s_grid[i] * st.density[i] * h;
        norm += st.density[i] * h;
    }
    mean /= norm;
    CHECK(std::abs(mean - s_star) / s_star < 0.02);
    double var = 0.0;
    for (std::size_t i = 0; i < st.s_grid.size(); ++i) {
        var += (st.s_grid[i] - mean) * (st.s_grid[i] - mean) * st.density[i] * h;
    }
    var /= norm;
    const double ou_var = fp_conditional_moments(m, s_star).b / (2.0 * m.q);
    CHECK(std::abs(var - ou_var) / ou_var < 0.05);
}

TEST_CASE("coarse-model oracle degenerate limits") {
    RandomStream rng(9090);
    FpModel dead;
    dead.mu_u = 0.0;
    dead.nu_u = 0.4;
    dead.q = 1.0;
    const auto s = simulate_coarse_model(dead, 3000, 100, rng);
    for (int v : s.values) CHECK(v <= 2);

    FpModel frozen;
    frozen.mu_u = 0.0;
    frozen.nu_u = 0.0;
    frozen.q = 0.3;
    RandomStream rng2(11);
    const auto f = simulate_coarse_model(frozen, 500, 0, rng2);
    for (std::size_t i = 1; i < f.values.size(); ++i) CHECK(f.values[i] <= f.values[i - 1]);
}

TEST_CASE("coarse-model oracle sits at the drift balance point") {
    FpModel m;
    m.mu_u = 1.0;
    m.nu_u = 0.25;
    m.q = 0.05;
    RandomStream rng(777);
    const auto s = simulate_coarse_model(m, 400000, 5000, rng);
    double mean = 0.0;
    for (int v : s.values) mean += v;
    mean /= static_cast<double>(s.values.size());
    CHECK(std::abs(mean - m.mu_u / m.q) / (m.mu_u / m.q) < 0.05);
}

TEST_CASE("stationary density matches the stochastic oracle in KL") {
    // c = 0 sector; the continuum solution should track the jump process
    FpModel m;
    m.mu_u = 1.0;
    m.nu_u = 0.5;
    m.q = 0.4;
    m.c = 0.0;
    RandomStream rng(31337);
    const auto samples = simulate_coarse_model(m, 400000, 5000, rng);
    const auto hist = histogram(samples);
    const FpStationary st = fp_stationary(m, 40.0, 4000);
    DensityCurve curve{st.s_grid, st.density};
    const AlignedPair pair = align(hist, curve);
    CHECK(kl_divergence(pair) < 0.05);
}

}  // TEST_SUITE
