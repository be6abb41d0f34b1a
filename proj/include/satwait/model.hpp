#pragma once

#include <string>
#include <string_view>

namespace satwait {

enum class Equation {
    RelativisticPM,  // u_t = div(u^m grad u / sqrt(u^2 + |grad u|^2))
    SpeedLimitedPM,  // u_t = div(u grad u^{M-1} / sqrt(1 + |grad u^{M-1}|^2))
};

std::string_view to_string(Equation e);
Equation equation_from_string(std::string_view name);

/// Prototype equation, its exponent (m or M) and the space dimension N.
/// Viscosity and limiting speed are normalized to one; callers working in
/// physical units rescale t by c^2/nu and x by c/nu beforehand.
struct ModelKind {
    Equation kind;
    double exponent;
    int dimension;

    /// Validating constructor: exponent > 1, dimension >= 1.
    static ModelKind make(Equation kind, double exponent, int dimension);
};

/// Radial flux component a(z, g) of the relativistic porous medium equation.
double flux_rel_pm(double z, double g, double m);

/// Radial flux component of the speed-limited porous medium equation.
double flux_slpm(double z, double g, double M);

double flux(const ModelKind& model, double z, double g);

/// Saturation level phi(z): |flux(z, g)| <= phi(z) with equality as |g| -> inf.
double recession_phi(double z, const ModelKind& model);

/// Formal speed of the support edge for a state bounded by umax:
/// umax^{m-1} for the relativistic equation, 1 for the speed-limited one.
double front_speed_bound(double umax, const ModelKind& model);

/// Upper bound for |d flux / dz| over z in [0, umax] and all g.
double flux_z_lipschitz(double umax, const ModelKind& model);

/// Upper bound for d flux / dg over z in [0, umax] and all g.
double flux_g_lipschitz(double umax, const ModelKind& model);

/// Critical growth exponent of the waiting-time criterion: 1/(m-1) or 2/(M-1).
double critical_growth_exponent(const ModelKind& model);

}  // namespace satwait
