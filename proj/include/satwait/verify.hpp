#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "satwait/model.hpp"
#include "satwait/solver.hpp"
#include "satwait/subsolutions.hpp"

namespace satwait {

// --- speed-limited family: pointwise bulk inequality u_t <= div a(u, grad u) ---

struct BulkResidualM {
    double residual = 0.0;  // u_t - div term; <= 0 means the inequality holds
    double u_t = 0.0;
    double div = 0.0;
    double tolerance = 0.0;  // 1e-8 (1 + |u_t| + |div|)
    double slack_lower = 0.0;
    double slack_upper = 0.0;
};

/// Closed-form residual at time t and distance y from the center.
/// Requires 0 <= t < lifetime and y strictly inside the support.
BulkResidualM bulk_residual_M(double t, double y, const MSubParams& p);

/// Value of the residual on the symmetry axis, y = 0, from its reduced form.
double bulk_residual_M_axis(double t, const MSubParams& p);

// --- relativistic family ------------------------------------------------------

/// gamma - G(r(tau), x_norm); nonnegative where the bulk inequality holds.
double bulk_residual_rel(double t, double x_norm, const RelSubParams& p);

/// A two-level clamp T(s) = max(min(b, s), a) - a with 0 < a < b.
struct Truncation {
    double a = 0.0;
    double b = 0.0;

    double operator()(double s) const;
    double derivative(double s) const;  // 1 on (a, b), else 0
};

struct JumpCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double u_plus = 0.0;
    double front_speed = 0.0;
    double quadrature_error = 0.0;
};

/// Integral form of the entropy inequality across the moving jump at real time t:
/// lhs = int_0^{u+} (S T)'(s) s (s^{m-1} - r') ds,  rhs = u+ T(u+) S(u+) ((u+)^{m-1} - r').
/// `front_speed` defaults to the Rankine-Hugoniot value (u+)^{m-1}.
JumpCheck jump_check_rel(double t, const RelSubParams& p, Truncation T, Truncation S,
                         std::optional<double> front_speed = std::nullopt);

/// |dr/dtau - A^{1-m}| by central differences in the unscaled time tau.
double rankine_hugoniot_defect(double tau, const RelSubParams& p, double h = 1e-6);

// --- certification -------------------------------------------------------------

struct CertificationOptions {
    int time_samples = 200;
    int space_samples = 200;
    double boundary_band = 1e-3;  // relative width of the skipped band at the support edge
    int truncation_pairs = 20;
    double quad_tol = 1e-10;
    double rh_tol = 1e-5;
    std::uint64_t seed = 42;
};

struct CertificationReport {
    std::string family;  // "M" or "rel"
    std::size_t n_samples = 0;
    double max_residual = 0.0;  // M: max of u_t - div; rel: max of G - gamma
    double min_slack = 0.0;     // M: min speed-window slack; rel: min jump slack rhs - lhs
    double max_rh_defect = 0.0;  // rel only
    double worst_t = 0.0;
    double worst_y = 0.0;
    bool pass = false;
};

CertificationReport certify_M(const MSubParams& p, const CertificationOptions& opt = {});
CertificationReport certify_rel(const RelSubParams& p, const CertificationOptions& opt = {});

// --- numerical comparison ---------------------------------------------------------

/// Radially symmetric subsolution about the grid origin.
struct RadialSubsolution {
    std::function<double(double t, double r)> eval;
    double lifetime = 0.0;
};

RadialSubsolution radial_view(const MSubParams& p);
RadialSubsolution radial_view(const RelSubParams& p);
RadialSubsolution zero_subsolution(double lifetime);

struct ComparisonConfig {
    double r_max = 2.0;
    int cells = 1024;
    double window = 0.8;  // fraction of the lifetime covered
    int output_times = 40;
    SchemeOptions scheme;
};

struct ComparisonReport {
    double min_gap = 0.0;  // min over cells and output times of u - u_sub
    double min_gap_on_support = 0.0;  // same, restricted to cells where u_sub > 0 (+inf if none)
    double min_gap_at_start = 0.0;    // at t = 0 over cells where u_sub > 0 (+inf if none)
    double at_t = 0.0;
    double at_r = 0.0;
    double umax = 0.0;  // initial maximum of u
    double t_end = 0.0;
    std::size_t steps = 0;
    double max_support_excess = 0.0;  // speed-limited model only, see RunResult
};

ComparisonReport comparison_test(const ModelKind& model, const RadialSubsolution& sub, double margin,
                                 const ComparisonConfig& cfg);

}  // namespace satwait
