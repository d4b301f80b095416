#include "mipt/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>

namespace mipt {

PchipInterpolant::PchipInterpolant(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
    const std::size_t n = xs_.size();
    if (n < 2 || ys_.size() != n) throw std::invalid_argument("pchip needs >= 2 points");
    for (std::size_t i = 1; i < n; ++i) {
        if (xs_[i] <= xs_[i - 1]) throw std::invalid_argument("pchip abscissae must increase");
    }
    std::vector<double> d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]);
    slopes_.assign(n, 0.0);
    slopes_[0] = d[0];
    slopes_[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (d[i - 1] * d[i] <= 0.0) {
            slopes_[i] = 0.0;
        } else {
            const double w1 = 2.0 * (xs_[i + 1] - xs_[i]) + (xs_[i] - xs_[i - 1]);
            const double w2 = (xs_[i + 1] - xs_[i]) + 2.0 * (xs_[i] - xs_[i - 1]);
            slopes_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
}

double PchipInterpolant::operator()(double x) const {
    const std::size_t n = xs_.size();
    if (x <= xs_.front()) return ys_.front() + slopes_.front() * (x - xs_.front());
    if (x >= xs_.back()) return ys_.back() + slopes_.back() * (x - xs_.back());
    std::size_t i =
        static_cast<std::size_t>(std::upper_bound(xs_.begin(), xs_.end(), x) - xs_.begin()) - 1;
    i = std::min(i, n - 2);
    const double h = xs_[i + 1] - xs_[i];
    const double t = (x - xs_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * ys_[i] + h10 * h * slopes_[i] + h01 * ys_[i + 1] + h11 * h * slopes_[i + 1];
}

std::vector<double> numeric_derivative(const std::vector<double>& xs,
                                       const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    if (n < 3 || ys.size() != n) throw std::invalid_argument("derivative needs >= 3 points");
    for (std::size_t i = 1; i < n; ++i) {
        if (xs[i] <= xs[i - 1]) throw std::domain_error("derivative grid must increase strictly");
    }
    std::vector<double> d(n);
    d[0] = (ys[1] - ys[0]) / (xs[1] - xs[0]);
    d[n - 1] = (ys[n - 1] - ys[n - 2]) / (xs[n - 1] - xs[n - 2]);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hl = xs[i] - xs[i - 1], hr = xs[i + 1] - xs[i];
        // three-point formula, exact for quadratics on non-uniform grids
        d[i] = (ys[i + 1] * hl * hl - ys[i - 1] * hr * hr + ys[i] * (hr * hr - hl * hl)) /
               (hl * hr * (hl + hr));
    }
    return d;
}

namespace {

struct XY {
    double x, y, w;
};

// RMS residual about a local linear fit with a uniform kernel of the given
// half-width; neighborhoods are widened to at least 3 points.
double master_curve_rms(std::vector<XY>& pts, double bandwidth) {
    std::sort(pts.begin(), pts.end(), [](const XY& a, const XY& b) { return a.x < b.x; });
    const std::size_t n = pts.size();
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double h = bandwidth;
        std::size_t lo = k, hi = k;
        for (int widen = 0; widen < 30; ++widen) {
            lo = k;
            while (lo > 0 && pts[k].x - pts[lo - 1].x <= h) --lo;
            hi = k;
            while (hi + 1 < n && pts[hi + 1].x - pts[k].x <= h) ++hi;
            if (hi - lo + 1 >= 3) break;
            h *= 2.0;
        }
        double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t j = lo; j <= hi; ++j) {
            const double w = pts[j].w;
            sw += w;
            sx += w * pts[j].x;
            sy += w * pts[j].y;
            sxx += w * pts[j].x * pts[j].x;
            sxy += w * pts[j].x * pts[j].y;
        }
        const double det = sw * sxx - sx * sx;
        double yhat;
        if (std::abs(det) < 1e-300) {
            yhat = sy / sw;
        } else {
            const double slope = (sw * sxy - sx * sy) / det;
            const double icept = (sy - slope * sx) / sw;
            yhat = icept + slope * pts[k].x;
        }
        const double r = pts[k].y - yhat;
        acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(n));
}

}  // namespace

ScalingFit fss_collapse(const std::vector<CurvePoint>& curves, double p_c_lo, double p_c_hi,
                        double nu_lo, double nu_hi) {
    if (p_c_hi <= p_c_lo || nu_hi <= nu_lo || nu_lo <= 0.0) {
        throw std::invalid_argument("bad collapse search ranges");
    }
    std::map<std::size_t, std::vector<std::pair<double, std::pair<double, double>>>> by_size;
    for (const CurvePoint& c : curves) by_size[c.L].push_back({c.p, {c.mean, c.se}});
    if (by_size.size() < 3) throw std::invalid_argument("collapse needs >= 3 system sizes");

    struct SizeCurve {
        double L;
        std::vector<double> p, mean, se;
        PchipInterpolant interp;
    };
    std::vector<SizeCurve> sizes;
    for (auto& [L, pts] : by_size) {
        if (pts.size() < 5) throw std::invalid_argument("collapse needs >= 5 points per size");
        std::sort(pts.begin(), pts.end());
        std::vector<double> p, mean, se;
        for (const auto& [pp, ms] : pts) {
            p.push_back(pp);
            mean.push_back(ms.first);
            se.push_back(ms.second);
        }
        if (p_c_lo < p.front() || p_c_hi > p.back()) {
            throw std::domain_error("candidate p_c range must lie inside the sampled p range");
        }
        sizes.push_back({static_cast<double>(L), p, mean, se, PchipInterpolant(p, mean)});
    }

    std::size_t evals = 0;
    const auto objective = [&](double pc, double nu) {
        ++evals;
        std::vector<XY> pts;
        pts.reserve(curves.size());
        double xmin = std::numeric_limits<double>::max(), xmax = -xmin;
        for (const SizeCurve& sc : sizes) {
            const double ref = sc.interp(pc);
            const double lpow = std::pow(sc.L, 1.0 / nu);
            for (std::size_t i = 0; i < sc.p.size(); ++i) {
                const double x = (sc.p[i] - pc) * lpow;
                const double y = std::abs(sc.mean[i] - ref);
                const double w = sc.se[i] > 0 ? 1.0 / (sc.se[i] * sc.se[i]) : 1.0;
                pts.push_back({x, y, w});
                xmin = std::min(xmin, x);
                xmax = std::max(xmax, x);
            }
        }
        return master_curve_rms(pts, 0.10 * (xmax - xmin));
    };

    double best_pc = p_c_lo, best_nu = nu_lo;
    double best = std::numeric_limits<double>::max();
    double clo = p_c_lo, chi = p_c_hi, nlo = nu_lo, nhi = nu_hi;
    constexpr int kGrid = 21;
    for (int pass = 0; pass < 4; ++pass) {
        for (int a = 0; a < kGrid; ++a) {
            const double pc = clo + (chi - clo) * a / (kGrid - 1);
            for (int b = 0; b < kGrid; ++b) {
                const double nu = nlo + (nhi - nlo) * b / (kGrid - 1);
                const double obj = objective(pc, nu);
                if (obj < best) {
                    best = obj;
                    best_pc = pc;
                    best_nu = nu;
                }
            }
        }
        const double dp = (chi - clo) / (kGrid - 1) * 2.0;
        const double dn = (nhi - nlo) / (kGrid - 1) * 2.0;
        clo = std::max(p_c_lo, best_pc - dp);
        chi = std::min(p_c_hi, best_pc + dp);
        nlo = std::max(nu_lo, best_nu - dn);
        nhi = std::min(nu_hi, best_nu + dn);
    }

    ScalingFit fit;
    fit.p_c = best_pc;
    fit.nu = best_nu;
    fit.objective = best;
    fit.p_c_lo = p_c_lo;
    fit.p_c_hi = p_c_hi;
    fit.nu_lo = nu_lo;
    fit.nu_hi = nu_hi;
    fit.grid_evaluations = evals;
    return fit;
}

PowerLawFit fit_area_power_law(const std::vector<SkewPoint>& points, double p_min_fit) {
    PowerLawFit fit;
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const SkewPoint& pt : points) {
        if (pt.p < p_min_fit) continue;
        if (pt.skew <= 0.0) {
            ++fit.n_excluded;
            continue;
        }
        const double x = std::log(pt.p);
        const double y = std::log(pt.skew);
        const double sigma = pt.se > 0 ? pt.se / pt.skew : 1.0;  // log-space error
        const double w = 1.0 / (sigma * sigma);
        sw += w;
        sx += w * x;
        sy += w * y;
        sxx += w * x * x;
        sxy += w * x * y;
        ++fit.n_used;
    }
    if (fit.n_used < 2) throw std::invalid_argument("power-law fit needs >= 2 usable points");
    const double det = sw * sxx - sx * sx;
    if (std::abs(det) < 1e-300) throw std::domain_error("degenerate power-law fit");
    const double slope = (sw * sxy - sx * sy) / det;
    const double icept = (sy - slope * sx) / sw;
    fit.exponent = slope;
    fit.amplitude = std::exp(icept);
    fit.se_exponent = std::sqrt(sw / det);
    fit.se_amplitude = fit.amplitude * std::sqrt(sxx / det);
    return fit;
}

namespace {

// Nelder-Mead on R^3; returns true when the simplex collapsed below tolerance.
bool nelder_mead3(const std::function<double(const std::array<double, 3>&)>& f,
                  std::array<double, 3>& x, double& fx, double scale, int max_iter) {
    using Vec = std::array<double, 3>;
    std::array<Vec, 4> simplex;
    std::array<double, 4> fv;
    simplex[0] = x;
    for (int i = 1; i < 4; ++i) {
        simplex[i] = x;
        simplex[i][i - 1] += scale * (std::abs(x[i - 1]) > 1e-12 ? 0.1 * std::abs(x[i - 1]) : 0.1);
    }
    for (int i = 0; i < 4; ++i) fv[i] = f(simplex[i]);

    const auto order = [&] {
        std::array<int, 4> idx{0, 1, 2, 3};
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] < fv[b]; });
        std::array<Vec, 4> s2;
        std::array<double, 4> f2;
        for (int i = 0; i < 4; ++i) {
            s2[i] = simplex[idx[i]];
            f2[i] = fv[idx[i]];
        }
        simplex = s2;
        fv = f2;
    };

    for (int it = 0; it < max_iter; ++it) {
        order();
        if (std::abs(fv[3] - fv[0]) < 1e-12 * (1.0 + std::abs(fv[0]))) {
            x = simplex[0];
            fx = fv[0];
            return true;
        }
        Vec centroid{};
        for (int i = 0; i < 3; ++i) {
            for (int d = 0; d < 3; ++d) centroid[d] += simplex[i][d] / 3.0;
        }
        const auto blend = [&](double t) {
            Vec v;
            for (int d = 0; d < 3; ++d) v[d] = centroid[d] + t * (simplex[3][d] - centroid[d]);
            return v;
        };
        const Vec xr = blend(-1.0);
        const double fr = f(xr);
        if (fr < fv[0]) {
            const Vec xe = blend(-2.0);
            const double fe = f(xe);
            if (fe < fr) {
                simplex[3] = xe;
                fv[3] = fe;
            } else {
                simplex[3] = xr;
                fv[3] = fr;
            }
        } else if (fr < fv[2]) {
            simplex[3] = xr;
            fv[3] = fr;
        } else {
            const Vec xc = blend(fr < fv[3] ? -0.5 : 0.5);
            const double fc = f(xc);
            if (fc < std::min(fr, fv[3])) {
                simplex[3] = xc;
                fv[3] = fc;
            } else {
                for (int i = 1; i < 4; ++i) {
                    for (int d = 0; d < 3; ++d) {
                        simplex[i][d] = simplex[0][d] + 0.5 * (simplex[i][d] - simplex[0][d]);
                    }
                    fv[i] = f(simplex[i]);
                }
            }
        }
    }
    order();
    x = simplex[0];
    fx = fv[0];
    return false;
}

}  // namespace

SkewnessFit fit_skewness_aux(const std::vector<SkewPoint>& points, double amplitude,
                             double exponent) {
    if (points.size() < 5) throw std::invalid_argument("auxiliary fit needs >= 5 points");
    std::vector<SkewPoint> pts = points;
    std::sort(pts.begin(), pts.end(),
              [](const SkewPoint& a, const SkewPoint& b) { return a.p < b.p; });

    const auto model = [&](const std::array<double, 3>& b, double p) {
        return amplitude * std::pow(p, exponent) + b[0] * (std::tanh(b[1] * (p - b[2])) - 1.0);
    };
    const auto objective = [&](const std::array<double, 3>& b) {
        if (b[1] <= 0.0) return 1e12;  // keep the crossover orientation fixed
        double acc = 0.0;
        for (const SkewPoint& pt : pts) {
            const double w = pt.se > 0 ? 1.0 / (pt.se * pt.se) : 1.0;
            const double r = pt.skew - model(b, pt.p);
            acc += w * r * r;
        }
        return acc;
    };

    // Multi-start grid over plateau depth, crossover sharpness, and location.
    double skew_min = pts.front().skew, skew_max = skew_min;
    for (const SkewPoint& pt : pts) {
        skew_min = std::min(skew_min, pt.skew);
        skew_max = std::max(skew_max, pt.skew);
    }
    const double p_lo = pts.front().p, p_hi = pts.back().p;
    const double depth = std::max(0.05, (skew_max - skew_min) / 2.0);
    const std::array<double, 2> b0s{0.5 * depth, depth};
    const std::array<double, 4> b1s{5.0 / (p_hi - p_lo), 15.0 / (p_hi - p_lo),
                                    40.0 / (p_hi - p_lo), 90.0 / (p_hi - p_lo)};
    const std::array<double, 2> b2s{p_lo + 0.35 * (p_hi - p_lo), p_lo + 0.6 * (p_hi - p_lo)};

    std::array<double, 3> best{};
    double best_f = std::numeric_limits<double>::max();
    bool any_converged = false;
    for (double b0 : b0s) {
        for (double b1 : b1s) {
            for (double b2 : b2s) {
                std::array<double, 3> x{b0, b1, b2};
                double fx = 0.0;
                const bool ok = nelder_mead3(objective, x, fx, 1.0, 2000);
                any_converged = any_converged || ok;
                if (fx < best_f) {
                    best_f = fx;
                    best = x;
                }
            }
        }
    }
    if (!any_converged) {
        throw std::runtime_error("auxiliary skewness fit failed to converge; best residual " +
                                 std::to_string(best_f));
    }

    SkewnessFit fit;
    fit.b0 = best[0];
    fit.b1 = best[1];
    fit.b2 = best[2];
    fit.amplitude = amplitude;
    fit.exponent = exponent;
    fit.objective = best_f;

    // Gauss-Newton covariance from finite-difference sensitivities.
    std::array<std::array<double, 3>, 3> jtj{};
    for (const SkewPoint& pt : pts) {
        const double w = pt.se > 0 ? 1.0 / (pt.se * pt.se) : 1.0;
        std::array<double, 3> g{};
        for (int d = 0; d < 3; ++d) {
            std::array<double, 3> bp = best, bm = best;
            const double h = 1e-6 * std::max(1.0, std::abs(best[d]));
            bp[d] += h;
            bm[d] -= h;
            g[d] = (model(bp, pt.p) - model(bm, pt.p)) / (2.0 * h);
        }
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) jtj[i][j] += w * g[i] * g[j];
        }
    }
    // invert 3x3 by adjugate
    const auto& m = jtj;
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    if (std::abs(det) > 1e-300) {
        const double inv = 1.0 / det;
        fit.covariance[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) * inv;
        fit.covariance[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) * inv;
        fit.covariance[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) * inv;
        fit.covariance[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) * inv;
        fit.covariance[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) * inv;
        fit.covariance[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) * inv;
        fit.covariance[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) * inv;
        fit.covariance[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) * inv;
        fit.covariance[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * inv;
    }

    // Peak and FWHM of the derivative of the fitted curve on a fine grid.
    constexpr std::size_t kFine = 2001;
    std::vector<double> xs(kFine), ys(kFine);
    for (std::size_t i = 0; i < kFine; ++i) {
        xs[i] = p_lo + (p_hi - p_lo) * static_cast<double>(i) / (kFine - 1);
        ys[i] = model(best, xs[i]);
    }
    const std::vector<double> dy = numeric_derivative(xs, ys);
    std::size_t imax = 0;
    for (std::size_t i = 1; i < kFine; ++i) {
        if (dy[i] > dy[imax]) imax = i;
    }
    fit.p_max = xs[imax];
    const double half = dy[imax] / 2.0;
    double left = xs.front(), right = xs.back();
    bool found_left = false, found_right = false;
    for (std::size_t i = imax; i > 0; --i) {
        if (dy[i - 1] < half) {
            const double t = (half - dy[i - 1]) / (dy[i] - dy[i - 1]);
            left = xs[i - 1] + t * (xs[i] - xs[i - 1]);
            found_left = true;
            break;
        }
    }
    for (std::size_t i = imax; i + 1 < kFine; ++i) {
        if (dy[i + 1] < half) {
            const double t = (dy[i] - half) / (dy[i] - dy[i + 1]);
            right = xs[i] + t * (xs[i + 1] - xs[i]);
            found_right = true;
            break;
        }
    }
    fit.fwhm = right - left;
    fit.fwhm_clipped = !(found_left && found_right);
    return fit;
}

}  // namespace mipt
