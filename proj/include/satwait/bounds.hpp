#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "satwait/model.hpp"
#include "satwait/solver.hpp"

namespace satwait {

/// T_ell = C L^{1-exponent}. C is not known in closed form and must be supplied.
double lower_bound_T_ell(double L, std::optional<double> C, const ModelKind& model);

struct UpperBound {
    double T_u = 0.0;
    double W = 0.0;
};

/// T_u = W L^{1-exponent}; W = 4^m for the relativistic equation and
/// 2^{M-1} / (K (ell - 1)) with the synthesis policy's K and ell otherwise.
UpperBound upper_bound_T_u(double L, int N, const ModelKind& model);

struct GrowthEstimateOptions {
    std::vector<double> radii = {1e-1, 1e-2, 1e-3};  // multiplied by r_ref
    double r_ref = 1.0;
    std::size_t samples = 10000;
    std::uint64_t seed = 42;
    /// Consecutive ratio growth above this factor at every refinement is read as divergence.
    double divergence_factor = 1.5;
};

struct GrowthEstimate {
    double L = 0.0;  // +inf when the ratio grows without bound
    std::vector<double> per_radius;
};

/// Approximates lim_{rho->0} inf_{B(x0 + rho v0, rho)} u0(x) |x - x0|^{-exponent}
/// by sampled minima over a decreasing sequence of rho.
GrowthEstimate estimate_growth_coefficient(const std::function<double(std::span<const double>)>& datum,
                                           std::span<const double> x0, std::span<const double> v0,
                                           double exponent, const GrowthEstimateOptions& opt = {});

struct ScalingPoint {
    double L = 0.0;
    WaitingTimeReport report;
    bool conclusive = false;
};

struct ScalingStudy {
    std::vector<ScalingPoint> points;
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // root-mean-square of the log-log fit residuals
    bool all_below_upper = true;
    bool conclusive = true;
};

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
};

/// Unweighted least squares y = slope x + intercept.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Measures t*(L) for each L with datum_for(L) and fits log t* against log L.
/// Needs at least three values of L. Runs up to `jobs` simulations concurrently.
/// The fit uses the conclusive points only; with fewer than two of them slope,
/// intercept and residual are NaN.
ScalingStudy scaling_study(const ModelKind& model, std::span<const double> Ls,
                           const std::function<Datum(double)>& datum_for, const GridPtr& grid,
                           const WaitingTimeSetup& setup, int jobs = 1,
                           double upper_allowance = 0.1);

}  // namespace satwait
