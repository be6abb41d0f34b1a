#include "satwait/model.hpp"

#include <cmath>
#include <limits>

#include "satwait/errors.hpp"

namespace satwait {

namespace {

// Below this the SLPM factor z^{M-2} may overflow for M < 2; the flux limit is 0.
constexpr double kZeroGuard = 1e-300;

void require_nonnegative(double z, const char* what) {
    if (!(z >= 0.0)) {
        throw DomainError(std::string(what) + ": negative density " + std::to_string(z));
    }
}

}  // namespace

std::string_view to_string(Equation e) {
    switch (e) {
        case Equation::RelativisticPM:
            return "rel_pm";
        case Equation::SpeedLimitedPM:
            return "slpm";
    }
    return "unknown";
}

Equation equation_from_string(std::string_view name) {
    if (name == "rel_pm" || name == "relativistic" || name == "m") return Equation::RelativisticPM;
    if (name == "slpm" || name == "speed_limited" || name == "M") return Equation::SpeedLimitedPM;
    throw ConfigError("unknown model kind '" + std::string(name) + "' (expected rel_pm or slpm)");
}

ModelKind ModelKind::make(Equation kind, double exponent, int dimension) {
    if (!(exponent > 1.0) || !std::isfinite(exponent)) {
        throw DomainError("model exponent must be a finite value > 1");
    }
    if (dimension < 1) {
        throw DomainError("model dimension must be >= 1");
    }
    return ModelKind{kind, exponent, dimension};
}

double flux_rel_pm(double z, double g, double m) {
    require_nonnegative(z, "flux_rel_pm");
    if (z == 0.0 || g == 0.0) return 0.0;
    if (std::isinf(g)) return std::copysign(std::pow(z, m), g);
    return std::pow(z, m) * (g / std::hypot(z, g));
}

double flux_slpm(double z, double g, double M) {
    require_nonnegative(z, "flux_slpm");
    if (z < kZeroGuard || g == 0.0) return 0.0;
    const double q = (M - 1.0) * std::pow(z, M - 2.0) * g;
    if (std::isinf(q)) return std::copysign(z, g);
    return z * (q / std::hypot(1.0, q));
}

double flux(const ModelKind& model, double z, double g) {
    return model.kind == Equation::RelativisticPM ? flux_rel_pm(z, g, model.exponent)
                                                  : flux_slpm(z, g, model.exponent);
}

double recession_phi(double z, const ModelKind& model) {
    require_nonnegative(z, "recession_phi");
    return model.kind == Equation::RelativisticPM ? std::pow(z, model.exponent) : z;
}

double front_speed_bound(double umax, const ModelKind& model) {
    if (model.kind == Equation::SpeedLimitedPM) return 1.0;
    return umax > 0.0 ? std::pow(umax, model.exponent - 1.0) : 0.0;
}

// d/dz of z^m g / sqrt(z^2+g^2) is bounded by m z^{m-1}. For the speed-limited
// flux, with q = (M-1) z^{M-2} g and s(q) = q/sqrt(1+q^2),
// d/dz = s(q) (1 + (M-2)/(1+q^2)), bounded by max(1, M-1).
double flux_z_lipschitz(double umax, const ModelKind& model) {
    if (model.kind == Equation::SpeedLimitedPM) return std::max(1.0, model.exponent - 1.0);
    return umax > 0.0 ? model.exponent * std::pow(umax, model.exponent - 1.0) : 0.0;
}

// d/dg is z^{m+2}/(z^2+g^2)^{3/2} <= z^{m-1}, resp. (M-1) z^{M-1}/(1+q^2)^{3/2}.
double flux_g_lipschitz(double umax, const ModelKind& model) {
    if (umax <= 0.0) return 0.0;
    const double e = model.exponent;
    if (model.kind == Equation::RelativisticPM) return std::pow(umax, e - 1.0);
    return (e - 1.0) * std::pow(umax, e - 1.0);
}

double critical_growth_exponent(const ModelKind& model) {
    return model.kind == Equation::RelativisticPM ? 1.0 / (model.exponent - 1.0)
                                                  : 2.0 / (model.exponent - 1.0);
}

}  // namespace satwait
