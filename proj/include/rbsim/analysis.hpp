// analysis.hpp — Decay-curve fitting: exponential and power-times-
// exponential model families, plus a derivative-free simplex minimizer.

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "rbsim/curve.hpp"

namespace rbsim::analysis {

struct NelderMeadOptions {
    int max_iter = 20000;
    double tol = 1e-12;
};

struct NelderMeadResult {
    std::vector<double> x;
    double fmin = 0;
    int iterations = 0;
    bool converged = false;
};

/// Standard reflect/expand/contract/shrink simplex; deterministic given x0.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                             const std::vector<double>& x0, NelderMeadOptions opts = {});

enum class FitModel { ExpOffset, PowExpOffset };

/// exp_offset:    A p^k + B         params (A, p)
/// powexp_offset: A k^-alpha e^(-beta k) + B   params (A, alpha, beta)
struct FitResult {
    FitModel model = FitModel::ExpOffset;
    double A = 0;
    double p = 0;      // exp model
    double alpha = 0;  // powexp model
    double beta = 0;   // powexp model
    double offset = 0;
    bool offset_fitted = false;
    double sse = 0;
    bool converged = false;
    bool log_fallback = false;  // log-space path abandoned for nonlinear fit
};

/// Least-squares fit of A p^k + B; weighted by 1/stderr^2 when present.
/// With offset_fixed, seeds from log-space linear regression and polishes
/// the stated objective with nelder_mead; otherwise fits (A, p, B) fully.
FitResult fit_exponential(const DecayCurve& curve, std::optional<double> offset_fixed);

/// Least-squares fit of A k^-alpha e^(-beta k) + B via multi-start
/// nelder_mead (alpha in {0.1, 0.5, 1, 2}, beta seeded from the exp fit).
FitResult fit_power_exponential(const DecayCurve& curve, std::optional<double> offset_fixed);

struct ModelComparison {
    FitResult exp_fit;
    FitResult powexp_fit;
    double sse_ratio = 0;  // sse(exp) / sse(powexp)
    bool non_exponential = false;
};

/// Runs both fits with the offset fixed and classifies the curve as
/// non-exponential when the sse ratio exceeds the threshold.
ModelComparison compare_models(const DecayCurve& curve, double offset, double threshold = 10.0);

}  // namespace rbsim::analysis
