#include "satwait/bounds.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "satwait/errors.hpp"
#include "satwait/sampling.hpp"
#include "satwait/subsolutions.hpp"

namespace satwait {

double lower_bound_T_ell(double L, std::optional<double> C, const ModelKind& model) {
    if (!C) throw ConfigError("lower bound requires the constant C");
    if (!(*C > 0.0)) throw ConfigError("lower bound constant C must be positive");
    if (!(L > 0.0)) throw DomainError("lower bound: L must be positive");
    return *C * std::exp((1.0 - model.exponent) * std::log(L));
}

UpperBound upper_bound_T_u(double L, int N, const ModelKind& model) {
    if (!(L > 0.0)) throw DomainError("upper bound: L must be positive");
    const double e = model.exponent;
    UpperBound out;
    if (model.kind == Equation::RelativisticPM) {
        out.W = std::pow(4.0, e);
    } else {
        const double K = 2.0 * N * (e - 1.0);
        const double ell = 1.0 + 0.5 * (m_largest_feasible_ell(N, e) - 1.0);
        out.W = std::pow(2.0, e - 1.0) / (K * (ell - 1.0));
    }
    out.T_u = std::isinf(L) ? 0.0 : out.W * std::exp((1.0 - e) * std::log(L));
    return out;
}

GrowthEstimate estimate_growth_coefficient(const std::function<double(std::span<const double>)>& datum,
                                           std::span<const double> x0, std::span<const double> v0,
                                           double exponent, const GrowthEstimateOptions& opt) {
    if (x0.size() != v0.size() || x0.empty()) throw DomainError("growth estimate: dimension mismatch");
    GrowthEstimate est;
    std::vector<double> center(x0.size());
    for (double rho_rel : opt.radii) {
        const double rho = rho_rel * opt.r_ref;
        for (std::size_t d = 0; d < x0.size(); ++d) center[d] = x0[d] + rho * v0[d];
        double lowest = std::numeric_limits<double>::infinity();
        for (const auto& x : sample_ball(center, rho, opt.samples, opt.seed)) {
            const double dist = distance(x, x0);
            if (dist <= 0.0) continue;
            lowest = std::min(lowest, datum(x) * std::pow(dist, -exponent));
        }
        est.per_radius.push_back(lowest);
    }
    const auto& v = est.per_radius;
    bool diverging = v.size() >= 2;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] > opt.divergence_factor * v[i - 1])) diverging = false;
    }
    if (v.back() <= 0.0) {
        est.L = 0.0;
    } else if (diverging) {
        est.L = std::numeric_limits<double>::infinity();
    } else {
        est.L = v.back();
    }
    return est;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw DomainError("fit_line: need at least two points");
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0.0) throw DomainError("fit_line: abscissae coincide");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.slope * x[i] + fit.intercept);
        ss += r * r;
    }
    fit.rms_residual = std::sqrt(ss / n);
    return fit;
}

ScalingStudy scaling_study(const ModelKind& model, std::span<const double> Ls,
                           const std::function<Datum(double)>& datum_for, const GridPtr& grid,
                           const WaitingTimeSetup& setup, int jobs, double upper_allowance) {
    if (Ls.size() < 3) throw ConfigError("scaling study needs at least three values of L");
    for (double L : Ls) {
        if (!(L > 0.0) || !std::isfinite(L)) throw ConfigError("scaling study: L must be positive and finite");
    }
    ScalingStudy study;
    study.points.resize(Ls.size());

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(Ls.size());
    auto worker = [&] {
        for (std::size_t i = next++; i < Ls.size(); i = next++) {
            try {
                WaitingTimeSetup s = setup;
                s.L = Ls[i];
                study.points[i].L = Ls[i];
                study.points[i].report = measure_waiting_time(model, datum_for(Ls[i]), grid, s);
                study.points[i].conclusive = study.points[i].report.reached;
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(Ls.size())));
    std::vector<std::thread> pool;
    for (int k = 1; k < n_threads; ++k) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    std::vector<double> lx, ly;
    for (const auto& p : study.points) {
        if (!p.conclusive) study.conclusive = false;
        if (p.report.t_star_measured > (1.0 + upper_allowance) * p.report.T_upper) {
            study.all_below_upper = false;
        }
        if (p.conclusive && p.report.t_star_measured > 0.0) {
            lx.push_back(std::log(p.L));
            ly.push_back(std::log(p.report.t_star_measured));
        }
    }
    if (lx.size() >= 2) {
        const LineFit fit = fit_line(lx, ly);
        study.slope = fit.slope;
        study.intercept = fit.intercept;
        study.residual = fit.rms_residual;
    } else {
        study.slope = std::nan("");
        study.intercept = std::nan("");
        study.residual = std::nan("");
    }
    return study;
}

}  // namespace satwait
