#include "rbsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rbsim::analysis {

namespace {

double simplex_diameter(const std::vector<std::vector<double>>& pts) {
    double diam = 0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        double d = 0;
        for (std::size_t j = 0; j < pts[0].size(); ++j) {
            const double diff = pts[i][j] - pts[0][j];
            d += diff * diff;
        }
        diam = std::max(diam, std::sqrt(d));
    }
    return diam;
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                             const std::vector<double>& x0, NelderMeadOptions opts) {
    const std::size_t n = x0.size();
    if (n == 0) throw std::invalid_argument("nelder_mead: empty start point");

    auto eval = [&](const std::vector<double>& x) {
        const double f = objective(x);
        if (std::isnan(f)) throw std::runtime_error("nelder_mead: objective returned NaN");
        return f;
    };

    std::vector<std::vector<double>> pts(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i)
        pts[i + 1][i] += (x0[i] != 0.0) ? 0.05 * x0[i] : 0.00025;
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i <= n; ++i) fv[i] = eval(pts[i]);

    NelderMeadResult res;
    int iter = 0;
    for (; iter < opts.max_iter; ++iter) {
        std::vector<std::size_t> order(n + 1);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        std::vector<std::vector<double>> spts(n + 1);
        std::vector<double> sfv(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            spts[i] = pts[order[i]];
            sfv[i] = fv[order[i]];
        }
        pts = std::move(spts);
        fv = std::move(sfv);

        if (simplex_diameter(pts) < opts.tol) {
            res.converged = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j] / double(n);

        auto affine = [&](double coef) {
            std::vector<double> x(n);
            for (std::size_t j = 0; j < n; ++j)
                x[j] = centroid[j] + coef * (pts[n][j] - centroid[j]);
            return x;
        };

        std::vector<double> xr = affine(-1.0);
        const double fr = eval(xr);
        if (fr < fv[0]) {
            std::vector<double> xe = affine(-2.0);
            const double fe = eval(xe);
            if (fe < fr) {
                pts[n] = xe;
                fv[n] = fe;
            } else {
                pts[n] = xr;
                fv[n] = fr;
            }
        } else if (fr < fv[n - 1]) {
            pts[n] = xr;
            fv[n] = fr;
        } else {
            const bool outside = fr < fv[n];
            std::vector<double> xc = affine(outside ? -0.5 : 0.5);
            const double fc = eval(xc);
            if (fc < std::min(fr, fv[n])) {
                pts[n] = xc;
                fv[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t j = 0; j < n; ++j)
                        pts[i][j] = pts[0][j] + 0.5 * (pts[i][j] - pts[0][j]);
                    fv[i] = eval(pts[i]);
                }
            }
        }
    }
    res.iterations = iter;
    res.x = pts[0];
    res.fmin = fv[0];
    return res;
}

namespace {

struct Points {
    std::vector<double> k, y, w;  // weights 1/stderr^2, or 1
};

Points sorted_points(const DecayCurve& curve) {
    if (curve.depths.size() != curve.values.size())
        throw std::invalid_argument("fit: depths/values length mismatch");
    std::vector<std::size_t> order(curve.depths.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return curve.depths[a] < curve.depths[b]; });
    const bool weighted = curve.stderrs.size() == curve.values.size() &&
                          std::all_of(curve.stderrs.begin(), curve.stderrs.end(),
                                      [](double s) { return s > 0; });
    Points pts;
    for (std::size_t i : order) {
        pts.k.push_back(double(curve.depths[i]));
        pts.y.push_back(curve.values[i]);
        pts.w.push_back(weighted ? 1.0 / (curve.stderrs[i] * curve.stderrs[i]) : 1.0);
    }
    return pts;
}

double sse_exp(const Points& pts, double A, double p, double B) {
    double s = 0;
    for (std::size_t i = 0; i < pts.k.size(); ++i) {
        const double r = pts.y[i] - (A * std::pow(p, pts.k[i]) + B);
        s += pts.w[i] * r * r;
    }
    return s;
}

double sse_powexp(const Points& pts, double A, double alpha, double beta, double B) {
    double s = 0;
    for (std::size_t i = 0; i < pts.k.size(); ++i) {
        const double r =
            pts.y[i] - (A * std::pow(pts.k[i], -alpha) * std::exp(-beta * pts.k[i]) + B);
        s += pts.w[i] * r * r;
    }
    return s;
}

// Weighted linear regression of log(y - B) on k; requires positive residuals.
bool log_regression(const Points& pts, double B, double& A, double& p) {
    double sw = 0, sk = 0, sl = 0, skk = 0, skl = 0;
    for (std::size_t i = 0; i < pts.k.size(); ++i) {
        const double r = pts.y[i] - B;
        if (r <= 0) return false;
        const double l = std::log(r);
        sw += pts.w[i];
        sk += pts.w[i] * pts.k[i];
        sl += pts.w[i] * l;
        skk += pts.w[i] * pts.k[i] * pts.k[i];
        skl += pts.w[i] * pts.k[i] * l;
    }
    const double det = sw * skk - sk * sk;
    if (std::abs(det) < 1e-300) return false;
    const double slope = (sw * skl - sk * sl) / det;
    const double intercept = (skk * sl - sk * skl) / det;
    p = std::exp(slope);
    A = std::exp(intercept);
    return true;
}

}  // namespace

FitResult fit_exponential(const DecayCurve& curve, std::optional<double> offset_fixed) {
    Points pts = sorted_points(curve);
    if (pts.k.size() < 3) throw std::invalid_argument("fit_exponential: need >= 3 points");

    FitResult fit;
    fit.model = FitModel::ExpOffset;

    const auto [ymin, ymax] = std::minmax_element(pts.y.begin(), pts.y.end());
    if (*ymax - *ymin < 1e-13 * std::max(1.0, std::abs(*ymax))) {
        // degenerate flat input: report p = 1 and flag it
        fit.offset = offset_fixed.value_or(0.0);
        fit.offset_fitted = !offset_fixed.has_value();
        fit.A = pts.y.front() - fit.offset;
        fit.p = 1.0;
        fit.sse = sse_exp(pts, fit.A, 1.0, fit.offset);
        fit.converged = false;
        return fit;
    }

    if (offset_fixed) {
        const double B = *offset_fixed;
        fit.offset = B;
        double A0 = 0, p0 = 0;
        if (log_regression(pts, B, A0, p0)) {
            fit.log_fallback = false;
        } else {
            // no log-space seed available (some residuals are non-positive);
            // profile A out in closed form on a p grid instead
            fit.log_fallback = true;
            double best = std::numeric_limits<double>::infinity();
            for (int i = 1; i < 100; ++i) {
                const double p = i / 100.0;
                double num = 0, den = 0;
                for (std::size_t j = 0; j < pts.k.size(); ++j) {
                    const double pk = std::pow(p, pts.k[j]);
                    num += pts.w[j] * (pts.y[j] - B) * pk;
                    den += pts.w[j] * pk * pk;
                }
                const double A = den > 0 ? num / den : 0.0;
                const double s = sse_exp(pts, A, p, B);
                if (s < best) {
                    best = s;
                    A0 = A;
                    p0 = p;
                }
            }
        }
        auto nm = nelder_mead(
            [&](const std::vector<double>& x) { return sse_exp(pts, x[0], x[1], B); },
            {A0, p0}, {20000, 1e-14});
        fit.A = nm.x[0];
        fit.p = nm.x[1];
        fit.sse = nm.fmin;
        fit.converged = nm.converged;
    } else {
        const double B0 = *std::min_element(pts.y.begin(), pts.y.end());
        const double A0 = std::max(pts.y.front() - B0, 0.1);
        auto nm = nelder_mead(
            [&](const std::vector<double>& x) { return sse_exp(pts, x[0], x[1], x[2]); },
            {A0, 0.9, B0}, {20000, 1e-14});
        fit.A = nm.x[0];
        fit.p = nm.x[1];
        fit.offset = nm.x[2];
        fit.offset_fitted = true;
        fit.sse = nm.fmin;
        fit.converged = nm.converged;
    }
    if (fit.p >= 1.0 - 1e-12) fit.converged = false;  // flat / non-decaying input
    return fit;
}

FitResult fit_power_exponential(const DecayCurve& curve, std::optional<double> offset_fixed) {
    Points pts = sorted_points(curve);
    if (pts.k.size() < 4) throw std::invalid_argument("fit_power_exponential: need >= 4 points");
    if (pts.k.front() < 1.0)
        throw std::invalid_argument("fit_power_exponential: depths must start at k >= 1");

    FitResult exp_fit = fit_exponential(curve, offset_fixed);
    const double beta0 =
        (exp_fit.p > 0 && exp_fit.p < 1) ? -std::log(exp_fit.p) : 0.1;

    FitResult best;
    best.model = FitModel::PowExpOffset;
    best.sse = std::numeric_limits<double>::infinity();

    for (double alpha0 : {0.1, 0.5, 1.0, 2.0}) {
        const double B = offset_fixed.value_or(
            *std::min_element(pts.y.begin(), pts.y.end()));
        const double k1 = pts.k.front();
        const double A0 = std::max(pts.y.front() - B, 1e-6) * std::pow(k1, alpha0) *
                          std::exp(beta0 * k1);
        NelderMeadResult nm;
        if (offset_fixed) {
            nm = nelder_mead(
                [&](const std::vector<double>& x) {
                    return sse_powexp(pts, x[0], x[1], x[2], *offset_fixed);
                },
                {A0, alpha0, beta0}, {20000, 1e-14});
        } else {
            nm = nelder_mead(
                [&](const std::vector<double>& x) {
                    return sse_powexp(pts, x[0], x[1], x[2], x[3]);
                },
                {A0, alpha0, beta0, B}, {20000, 1e-14});
        }
        const bool better =
            nm.fmin < best.sse ||
            (nm.fmin == best.sse && nm.x < std::vector<double>{best.A, best.alpha, best.beta});
        if (better) {
            best.A = nm.x[0];
            best.alpha = nm.x[1];
            best.beta = nm.x[2];
            best.offset = offset_fixed ? *offset_fixed : nm.x[3];
            best.offset_fitted = !offset_fixed.has_value();
            best.sse = nm.fmin;
            best.converged = nm.converged;
        }
    }
    return best;
}

ModelComparison compare_models(const DecayCurve& curve, double offset, double threshold) {
    ModelComparison cmp;
    cmp.exp_fit = fit_exponential(curve, offset);
    cmp.powexp_fit = fit_power_exponential(curve, offset);
    if (cmp.powexp_fit.sse > 0) {
        cmp.sse_ratio = cmp.exp_fit.sse / cmp.powexp_fit.sse;
    } else {
        cmp.sse_ratio = cmp.exp_fit.sse > 0 ? std::numeric_limits<double>::infinity() : 1.0;
    }
    cmp.non_exponential = cmp.sse_ratio > threshold;
    return cmp;
}

}  // namespace rbsim::analysis
