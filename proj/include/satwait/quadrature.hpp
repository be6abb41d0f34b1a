#pragma once

#include <functional>
#include <span>

namespace satwait {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int intervals = 0;
    bool converged = false;
};

/// Adaptive Gauss-Kronrod (7/15) integration of f over [a, b]. Points in
/// `breakpoints` lying inside (a, b) start as interval boundaries, which keeps
/// kinks of piecewise-smooth integrands off the quadrature nodes.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    std::span<const double> breakpoints = {},
                                    double abs_tol = 1e-13, double rel_tol = 1e-12,
                                    int max_intervals = 2000);

}  // namespace satwait
