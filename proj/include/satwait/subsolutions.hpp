#pragma once

#include <span>
#include <vector>

namespace satwait {

// ---------------------------------------------------------------------------
// Speed-limited family: a compactly supported, continuous profile whose
// support radius s + w t grows at constant speed w.
// ---------------------------------------------------------------------------

struct MSubParams {
    double M = 2.0;
    int N = 1;
    double b = 1.0;
    double ell = 2.0;   // > 1
    double K = 1.0;
    double w = 1.0;     // front speed
    double s = 1.0;     // initial support radius
    std::vector<double> center;
    double lifetime = 1.0;  // s / (w K)

    /// Fills in lifetime; checks positivity and ell > 1 (not the speed window).
    static MSubParams make(double M, int N, double b, double ell, double K, double w, double s,
                           std::vector<double> center);
};

/// Evaluates the profile at a point of R^N. Throws LifetimeExceeded for t >= lifetime.
double eval_m_sub(double t, std::span<const double> x, const MSubParams& p);

/// Same profile, as a function of the distance to the center.
double eval_m_sub_radial(double t, double dist, const MSubParams& p);

struct MValidity {
    double slack_lower = 0.0;  // w - 2N(M-1)/b
    double slack_upper = 0.0;  // 1/sqrt(1 + b^2/4 (ell-1+ell/K)^2) - w
    bool valid() const { return slack_lower >= 0.0 && slack_upper >= 0.0; }
};

MValidity validate_m_params(const MSubParams& p);

/// Upper end of the admissible speed window for (b, ell, K).
double m_speed_upper(double b, double ell, double K);

struct MSynthesis {
    MSubParams params;
    double T_upper = 0.0;  // time at which the support reaches the observation point
    double W = 0.0;        // T_upper = W L^{1-M}
    double r1 = 0.0;
    double alpha = 0.0;
    double ell_star = 0.0;  // largest feasible ell found by bisection
};

/// Largest ell in (1, 1+2/K] satisfying the r1-free speed constraint.
double m_largest_feasible_ell(int N, double M);

/// Parameters for a datum growing like L |x|^{2/(M-1)} from x0 = 0 along
/// v0 = -e_1 with interior ball radius R. The profile is centered at r1 v0.
MSynthesis synthesize_m_params(double L, double R, int N, double M);

// ---------------------------------------------------------------------------
// Relativistic family: profile (1 + sqrt(r^2 - |x|^2)) / A inside a ball whose
// radius obeys the Rankine-Hugoniot relation r' = A^{1-m}, jumping to zero at
// the boundary. Amplitude U and center xi enter through u(t,x) = U v(U^{m-1}t, x-xi).
// ---------------------------------------------------------------------------

struct RelSubParams {
    double m = 2.0;
    int N = 1;
    double gamma = 1.0;
    double r0 = 1.0;
    double U = 1.0;
    std::vector<double> center;
    double horizon = 1.0;  // unscaled time window; real window is U^{1-m} horizon
    double r1 = 1.0;       // radius used for the gamma0 search
    double gamma0 = 1.0;
};

/// A(tau) = ((m-1)(1 + gamma tau))^{1/(m-1)} in the unscaled time tau.
double rel_amplitude(double tau, const RelSubParams& p);

/// r(tau) = r0 + log(1 + gamma tau) / (gamma (m-1)) in the unscaled time tau.
double rel_radius_unscaled(double tau, const RelSubParams& p);

/// Real-time window length U^{1-m} horizon.
double rel_time_window(const RelSubParams& p);

double eval_rel_sub(double t, std::span<const double> x, const RelSubParams& p);
double eval_rel_sub_radial(double t, double dist, const RelSubParams& p);

/// Support radius at real time t.
double front_radius_rel(double t, const RelSubParams& p);

/// Height U/A of the jump at the support boundary at real time t.
double rel_jump_height(double t, const RelSubParams& p);

/// G(rho, y): the smallest gamma for which the bulk inequality holds at a
/// point at distance y < rho from the center of a ball of radius rho.
double bulk_gamma_requirement(double rho, double y, int N, double m);

struct Gamma0Options {
    int rho_cells = 512;
    int y_cells = 512;
    double band = 1e-3;  // excludes y > (1 - band) rho, where G < 0
    int refine_sweeps = 12;
};

struct Gamma0Result {
    double gamma0 = 1.0;  // max(sup G, 1)
    double sup_G = 0.0;
    double arg_rho = 0.0;
    double arg_y = 0.0;
    double rho_min = 0.0;
    double rho_max = 0.0;
};

/// Supremum of G over [r1/2, r1 + log(1+T)/(m-1)] x [0, rho).
Gamma0Result gamma0_search(int N, double m, double T, double r1, const Gamma0Options& opt = {});
double gamma0(int N, double m, double T, double r1);

struct RelSynthesis {
    RelSubParams params;
    double T_upper = 0.0;
    double W = 0.0;  // 4^m
};

RelSynthesis synthesize_rel_params(double L, double R, int N, double m);

}  // namespace satwait
