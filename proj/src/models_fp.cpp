#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

#include "mipt/models.hpp"

namespace mipt {

namespace {

// C(L-2k, N) / C(L, N) as a product of falling-factor ratios; no factorials.
double binom_shrink_ratio(std::size_t L, std::size_t N, std::size_t k2) {
    double r = 1.0;
    for (std::size_t i = 0; i < k2; ++i) {
        const double num = static_cast<double>(L - N) - static_cast<double>(i);
        const double den = static_cast<double>(L) - static_cast<double>(i);
        r *= std::max(0.0, num) / den;
    }
    return r;
}

}  // namespace

double fp_q_exact(std::size_t L, std::size_t n_measured) {
    if (L < 2) throw std::domain_error("fp_q needs L >= 2");
    if (n_measured > L) throw std::domain_error("measured count exceeds system size");
    return 1.0 - binom_shrink_ratio(L, n_measured, 2);
}

double fp_q_exact_rate(std::size_t L, double p) {
    if (p < 0.0 || p > 1.0) throw std::domain_error("rate must lie in [0,1]");
    return fp_q_exact(L, static_cast<std::size_t>(std::lround(p * static_cast<double>(L))));
}

double fp_q_asymptotic(double p) {
    if (p < 0.0 || p > 1.0) throw std::domain_error("rate must lie in [0,1]");
    return 1.0 - (1.0 - p) * (1.0 - p);
}

double fp_r(std::size_t L, std::size_t n_measured) {
    if (L < 4) throw std::domain_error("fp_r needs L >= 4");
    if (n_measured > L) throw std::domain_error("measured count exceeds system size");
    return 1.0 - 2.0 * binom_shrink_ratio(L, n_measured, 2) + binom_shrink_ratio(L, n_measured, 4);
}

double fp_r_minus_q2(std::size_t L, std::size_t n_measured) {
    const double q = fp_q_exact(L, n_measured);
    return fp_r(L, n_measured) - q * q;
}

double fp_r_minus_q2_asymptotic(double p, std::size_t L) {
    return -4.0 * p * std::pow(1.0 - p, 3) / static_cast<double>(L);
}

CQuadratic paper_c_quadratic() { return {0.3285, -0.4536, 0.1239}; }

double fp_c(double q) {
    if (q < 0.0 || q > 1.0) throw std::domain_error("q must lie in [0,1]");
    return paper_c_quadratic().eval(q);
}

CQuadratic fit_c_quadratic(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw std::invalid_argument("quadratic fit needs >= 3 points");
    // Normal equations for [q^2 q 1] coefficients.
    std::array<std::array<double, 3>, 3> m{};
    std::array<double, 3> rhs{};
    for (const auto& [q, c] : points) {
        const std::array<double, 3> basis{q * q, q, 1.0};
        for (int i = 0; i < 3; ++i) {
            rhs[i] += basis[i] * c;
            for (int j = 0; j < 3; ++j) m[i][j] += basis[i] * basis[j];
        }
    }
    // Gaussian elimination with partial pivoting.
    std::array<int, 3> perm{0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r) {
            if (std::abs(m[perm[r]][col]) > std::abs(m[perm[piv]][col])) piv = r;
        }
        std::swap(perm[col], perm[piv]);
        const double d = m[perm[col]][col];
        if (std::abs(d) < 1e-14) throw std::invalid_argument("degenerate quadratic fit");
        for (int r = col + 1; r < 3; ++r) {
            const double f = m[perm[r]][col] / d;
            for (int cc = col; cc < 3; ++cc) m[perm[r]][cc] -= f * m[perm[col]][cc];
            rhs[perm[r]] -= f * rhs[perm[col]];
        }
    }
    std::array<double, 3> x{};
    for (int row = 2; row >= 0; --row) {
        double acc = rhs[perm[row]];
        for (int cc = row + 1; cc < 3; ++cc) acc -= m[perm[row]][cc] * x[cc];
        x[row] = acc / m[perm[row]][row];
    }
    return {x[0], x[1], x[2]};
}

double estimate_c_from_series(const std::vector<int>& series, double mu, double nu, double q) {
    if (series.size() < 2) throw std::invalid_argument("need at least one entropy step");
    // Regress the residual conditional variance against S(S-1) through the
    // origin; S in {0, 1} carries no information about c.
    std::map<int, std::pair<double, std::size_t>> by_s;  // S -> (sum sq residual, count)
    for (std::size_t t = 0; t + 1 < series.size(); ++t) {
        const int s = series[t];
        const double ds = static_cast<double>(series[t + 1] - series[t]);
        const double resid = ds - (mu - q * static_cast<double>(s));
        auto& acc = by_s[s];
        acc.first += resid * resid;
        acc.second += 1;
    }
    double num = 0.0, den = 0.0;
    for (const auto& [s, acc] : by_s) {
        if (s < 2 || acc.second < 2) continue;
        const double sd = static_cast<double>(s);
        const double basis = sd * (sd - 1.0);
        const double v = acc.first / static_cast<double>(acc.second);
        const double target = v - nu - q * (1.0 - q) * sd;
        const double w = static_cast<double>(acc.second);
        num += w * basis * target;
        den += w * basis * basis;
    }
    if (den <= 0.0) throw std::domain_error("series never leaves S < 2; c is unidentifiable");
    return num / den;
}

ConditionalMoments fp_conditional_moments(const FpModel& model, double s) {
    if (s < 0.0) throw std::domain_error("entropy must be non-negative");
    ConditionalMoments m;
    m.a = model.mu_u - model.q * s;
    m.b = model.nu_u + model.alpha() * s + model.c * s * (s - 1.0);
    if (m.b <= 0.0) {
        throw std::domain_error("diffusion b(S) <= 0: model parameters outside the physical regime");
    }
    return m;
}

namespace {

// Adaptive Simpson for the smooth drift/diffusion ratio.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 24);
}

}  // namespace

FpStationary fp_stationary(const FpModel& model, double s_max, std::size_t n_grid) {
    if (s_max <= 0.0 || n_grid < 8) throw std::invalid_argument("bad stationary grid");

    const auto ratio = [&](double s) {
        const ConditionalMoments m = fp_conditional_moments(model, s);
        return 2.0 * m.a / m.b;
    };

    FpStationary out;
    for (int attempt = 0; attempt < 4; ++attempt) {
        const double smax = s_max * static_cast<double>(1 << attempt);
        const std::size_t ng = n_grid * static_cast<std::size_t>(1 << attempt);
        const double h = smax / static_cast<double>(ng - 1);

        std::vector<double> grid(ng), logp(ng);
        double acc = 0.0;
        grid[0] = 0.0;
        logp[0] = -std::log(fp_conditional_moments(model, 0.0).b);
        for (std::size_t k = 1; k < ng; ++k) {
            grid[k] = static_cast<double>(k) * h;
            acc += integrate(ratio, grid[k - 1], grid[k], 1e-12);
            logp[k] = acc - std::log(fp_conditional_moments(model, grid[k]).b);
        }
        const double peak = *std::max_element(logp.begin(), logp.end());
        std::vector<double> dens(ng);
        for (std::size_t k = 0; k < ng; ++k) dens[k] = std::exp(logp[k] - peak);
        double norm = 0.0;
        for (std::size_t k = 1; k < ng; ++k) norm += 0.5 * (dens[k] + dens[k - 1]) * h;
        for (double& d : dens) d /= norm;

        const double peak_density = *std::max_element(dens.begin(), dens.end());
        const double tail = dens.back() / peak_density;
        if (tail < 1e-12) {
            out.s_grid = std::move(grid);
            out.density = std::move(dens);
            out.tail_fraction = tail;
            out.grid_extended = attempt > 0;
            return out;
        }
    }
    throw std::runtime_error("stationary density tail not negligible after grid extension");
}

EntropySamples simulate_coarse_model(const FpModel& model, std::size_t steps, std::size_t burnin,
                                     RandomStream& rng) {
    if (steps <= burnin) throw std::invalid_argument("need steps > burnin");
    const double sigma = std::sqrt(model.nu_u);
    EntropySamples out;
    out.p = model.p;
    out.values.reserve(steps - burnin);
    double s = 0.0;
    for (std::size_t t = 0; t < steps; ++t) {
        const double gain = rng.gaussian(model.mu_u, sigma);
        const auto pairs = static_cast<std::uint64_t>(std::max(0.0, std::round(s)));
        const double loss = static_cast<double>(rng.binomial(pairs, model.q));
        s = std::max(0.0, s + gain - loss);
        if (t >= burnin) out.values.push_back(static_cast<int>(std::lround(s)));
    }
    return out;
}

}  // namespace mipt
