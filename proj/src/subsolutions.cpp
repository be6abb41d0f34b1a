#include "satwait/subsolutions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "satwait/errors.hpp"
#include "satwait/sampling.hpp"

namespace satwait {

namespace {

constexpr std::size_t kProfileSamples = 10000;

// Relative slack for the sampled u(0) <= datum check; the two touch at one point.
constexpr double kProfileRelTol = 1e-9;

std::vector<double> observation_offset(int N, double r1) {
    std::vector<double> c(static_cast<std::size_t>(N), 0.0);
    c[0] = -r1;
    return c;
}

double maximize_golden(const std::function<double(double)>& f, double lo, double hi, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    // The sup may sit on an endpoint of the bracket.
    double best = 0.5 * (a + b);
    double fbest = f(best);
    for (double x : {lo, hi}) {
        const double fx = f(x);
        if (fx > fbest) {
            fbest = fx;
            best = x;
        }
    }
    return best;
}

}  // namespace

// --- speed-limited family ---------------------------------------------------

MSubParams MSubParams::make(double M, int N, double b, double ell, double K, double w, double s,
                            std::vector<double> center) {
    if (!(M > 1.0)) throw DomainError("MSubParams: M must be > 1");
    if (N < 1) throw DomainError("MSubParams: N must be >= 1");
    if (!(b > 0.0) || !(K > 0.0) || !(w > 0.0) || !(s > 0.0)) {
        throw DomainError("MSubParams: b, K, w, s must be positive");
    }
    if (!(ell > 1.0)) throw DomainError("MSubParams: ell must be > 1");
    if (center.empty()) center.assign(static_cast<std::size_t>(N), 0.0);
    if (static_cast<int>(center.size()) != N) throw DomainError("MSubParams: center has wrong dimension");
    return MSubParams{M, N, b, ell, K, w, s, std::move(center), s / (w * K)};
}

double eval_m_sub_radial(double t, double dist, const MSubParams& p) {
    if (!(t >= 0.0)) throw DomainError("eval_m_sub: negative time");
    if (!(t < p.lifetime)) {
        throw LifetimeExceeded("eval_m_sub: t = " + std::to_string(t) + " is past the lifetime " +
                               std::to_string(p.lifetime));
    }
    const double B = p.s + p.w * t;
    const double z = dist / B;
    const double inner = 1.0 - z * z;
    if (inner <= 0.0) return 0.0;
    const double inv = 1.0 / (p.M - 1.0);
    const double base = p.b * (p.ell / p.s - 1.0 / B);
    return std::pow(base, -inv) * std::pow(inner, inv);
}

double eval_m_sub(double t, std::span<const double> x, const MSubParams& p) {
    if (x.size() != p.center.size()) throw DomainError("eval_m_sub: point has wrong dimension");
    return eval_m_sub_radial(t, distance(x, p.center), p);
}

double m_speed_upper(double b, double ell, double K) {
    const double g = ell - 1.0 + ell / K;
    return 1.0 / std::sqrt(1.0 + 0.25 * b * b * g * g);
}

MValidity validate_m_params(const MSubParams& p) {
    MValidity v;
    v.slack_lower = p.w - 2.0 * p.N * (p.M - 1.0) / p.b;
    v.slack_upper = m_speed_upper(p.b, p.ell, p.K) - p.w;
    return v;
}

double m_largest_feasible_ell(int N, double M) {
    const double K = 2.0 * N * (M - 1.0);
    const double alpha = 2.0 * K;
    const double c1 = 4.0 / ((alpha + 1.0) * (alpha + 1.0) * std::pow(4.0, M - 1.0));
    auto excess = [&](double ell) {
        const double d = ell - 1.0;
        const double g = d + ell / K;
        return c1 * d * d + g * g - 4.0 / (K * K);
    };
    double lo = 1.0;             // feasible: excess = -3/K^2
    double hi = 1.0 + 2.0 / K;   // infeasible: (3/K + 2/K^2)^2 > 4/K^2
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) <= 0.0 ? lo : hi) = mid;
    }
    if (!(lo > 1.0)) throw SynthesisError("no feasible ell > 1 found");
    return lo;
}

MSynthesis synthesize_m_params(double L, double R, int N, double M) {
    if (!(L > 0.0) || !std::isfinite(L) || !(R > 0.0) || !std::isfinite(R)) {
        throw DomainError("synthesize_m_params: L and R must be positive and finite");
    }
    if (N < 1 || !(M > 1.0)) throw DomainError("synthesize_m_params: need N >= 1 and M > 1");

    MSynthesis out;
    const double K = 2.0 * N * (M - 1.0);
    const double alpha = 2.0 * K;
    const double log_L = std::log(L);
    const double log_len = (1.0 - M) * log_L;  // log L^{1-M}
    const double r1 = std::min(R, std::exp(log_len));
    const double s = alpha / (alpha + 1.0) * r1;

    const double ell_star = m_largest_feasible_ell(N, M);
    const double ell = 1.0 + 0.5 * (ell_star - 1.0);

    const double log_b = std::log(alpha) + (M - 1.0) * std::log(2.0) + log_len - std::log(s) -
                         std::log(ell - 1.0);
    const double b = std::exp(log_b);
    const double w = K / b;

    out.params = MSubParams::make(M, N, b, ell, K, w, s, observation_offset(N, r1));
    out.W = std::pow(2.0, M - 1.0) / (K * (ell - 1.0));
    out.T_upper = std::exp((M - 1.0) * std::log(2.0) + log_len) / (K * (ell - 1.0));
    out.r1 = r1;
    out.alpha = alpha;
    out.ell_star = ell_star;

    const MValidity v = validate_m_params(out.params);
    if (!v.valid()) {
        throw SynthesisError("synthesized speed-limited parameters violate the speed window");
    }

    // u(0) must lie below the critical profile (L/2)|x|^{2/(M-1)} on B(R v0, R).
    const auto ball_center = observation_offset(N, R);
    const double p = 2.0 / (M - 1.0);
    for (const auto& x : sample_ball(ball_center, R, kProfileSamples)) {
        const double sub = eval_m_sub(0.0, x, out.params);
        const double datum = 0.5 * L * std::pow(euclidean_norm(x), p);
        if (sub > datum * (1.0 + kProfileRelTol) + 1e-300) {
            throw SynthesisError("speed-limited subsolution exceeds the growth profile at t = 0");
        }
    }
    return out;
}

// --- relativistic family -----------------------------------------------------

double rel_amplitude(double tau, const RelSubParams& p) {
    return std::pow((p.m - 1.0) * (1.0 + p.gamma * tau), 1.0 / (p.m - 1.0));
}

double rel_radius_unscaled(double tau, const RelSubParams& p) {
    return p.r0 + std::log1p(p.gamma * tau) / (p.gamma * (p.m - 1.0));
}

double rel_time_window(const RelSubParams& p) {
    return std::pow(p.U, 1.0 - p.m) * p.horizon;
}

namespace {

double checked_tau(double t, const RelSubParams& p, const char* who) {
    if (!(t >= 0.0)) throw DomainError(std::string(who) + ": negative time");
    if (!(t < rel_time_window(p))) {
        throw LifetimeExceeded(std::string(who) + ": t = " + std::to_string(t) +
                               " is past the horizon " + std::to_string(rel_time_window(p)));
    }
    return std::pow(p.U, p.m - 1.0) * t;
}

}  // namespace

double eval_rel_sub_radial(double t, double dist, const RelSubParams& p) {
    const double tau = checked_tau(t, p, "eval_rel_sub");
    const double r = rel_radius_unscaled(tau, p);
    if (!(dist < r)) return 0.0;
    return p.U / rel_amplitude(tau, p) * (1.0 + std::sqrt(r * r - dist * dist));
}

double eval_rel_sub(double t, std::span<const double> x, const RelSubParams& p) {
    if (x.size() != p.center.size()) throw DomainError("eval_rel_sub: point has wrong dimension");
    return eval_rel_sub_radial(t, distance(x, p.center), p);
}

double front_radius_rel(double t, const RelSubParams& p) {
    if (!(t >= 0.0)) throw DomainError("front_radius_rel: negative time");
    return rel_radius_unscaled(std::pow(p.U, p.m - 1.0) * t, p);
}

double rel_jump_height(double t, const RelSubParams& p) {
    const double tau = checked_tau(t, p, "rel_jump_height");
    return p.U / rel_amplitude(tau, p);
}

double bulk_gamma_requirement(double rho, double y, int N, double m) {
    if (!(rho > 0.0) || !(y >= 0.0) || !(y < rho)) {
        throw DomainError("bulk_gamma_requirement: need 0 <= y < rho");
    }
    const double eta = std::sqrt((rho - y) * (rho + y));
    const double one_eta = 1.0 + eta;
    const double y2 = y * y;
    const double D = std::sqrt(eta * eta * one_eta * one_eta + y2);
    const double E = one_eta * one_eta + eta * one_eta - 1.0;
    const double pm = std::pow(one_eta, m);
    const double F = -(N * pm / D + y2 * pm * E / (D * D * D) -
                       m * y2 * std::pow(one_eta, m - 1.0) / (eta * D));
    return (rho / eta - F) / one_eta;
}

Gamma0Result gamma0_search(int N, double m, double T, double r1, const Gamma0Options& opt) {
    if (!(T > 0.0) || !(r1 > 0.0)) throw DomainError("gamma0: need T > 0 and r1 > 0");
    Gamma0Result res;
    res.rho_min = 0.5 * r1;
    res.rho_max = r1 + std::log1p(T) / (m - 1.0);
    const double theta_max = 1.0 - opt.band;

    auto G = [&](double rho, double theta) { return bulk_gamma_requirement(rho, theta * rho, N, m); };

    const double d_rho = (res.rho_max - res.rho_min) / opt.rho_cells;
    const double d_theta = theta_max / opt.y_cells;
    double best = -INFINITY;
    int bi = 0, bj = 0;
    for (int i = 0; i <= opt.rho_cells; ++i) {
        const double rho = res.rho_min + i * d_rho;
        for (int j = 0; j <= opt.y_cells; ++j) {
            const double g = G(rho, j * d_theta);
            if (g > best) {
                best = g;
                bi = i;
                bj = j;
            }
        }
    }

    // Coordinate-wise golden-section refinement inside the neighbouring cells.
    double rho = res.rho_min + bi * d_rho;
    double theta = bj * d_theta;
    const double rho_lo = std::max(res.rho_min, rho - d_rho);
    const double rho_hi = std::min(res.rho_max, rho + d_rho);
    const double th_lo = std::max(0.0, theta - d_theta);
    const double th_hi = std::min(theta_max, theta + d_theta);
    for (int sweep = 0; sweep < opt.refine_sweeps; ++sweep) {
        rho = maximize_golden([&](double r) { return G(r, theta); }, rho_lo, rho_hi, 1e-13);
        theta = maximize_golden([&](double th) { return G(rho, th); }, th_lo, th_hi, 1e-13);
    }
    const double refined = G(rho, theta);
    if (refined > best) {
        best = refined;
    } else {
        rho = res.rho_min + bi * d_rho;
        theta = bj * d_theta;
    }
    res.sup_G = best;
    res.arg_rho = rho;
    res.arg_y = theta * rho;
    res.gamma0 = std::max(best, 1.0);
    return res;
}

double gamma0(int N, double m, double T, double r1) {
    return gamma0_search(N, m, T, r1).gamma0;
}

RelSynthesis synthesize_rel_params(double L, double R, int N, double m) {
    if (!(L > 0.0) || !std::isfinite(L) || !(R > 0.0) || !std::isfinite(R)) {
        throw DomainError("synthesize_rel_params: L and R must be positive and finite");
    }
    if (N < 1 || !(m > 1.0)) throw DomainError("synthesize_rel_params: need N >= 1 and m > 1");

    const double log_L = std::log(L);
    const double log4 = std::log(4.0);
    const double horizon = std::exp((m + 1.0) * log4 + (1.0 - m) * log_L);
    const double r1 = std::min({R, 1.0 / (m - 1.0), 1.0});
    const double g0 = gamma0(N, m, horizon, r1);
    const double gamma = std::max(g0, 2.0);
    const double r0 = r1 * (gamma - 1.0) / gamma;
    const double log_Um1 = std::log(m - 1.0) + (m - 1.0) * (log_L - log4) + std::log(r1) - std::log(gamma);
    const double U = std::exp(log_Um1 / (m - 1.0));

    RelSynthesis out;
    out.params = RelSubParams{m, N, gamma, r0, U, observation_offset(N, r1), horizon, r1, g0};
    const double k = (m - 1.0) * r1;
    out.T_upper = std::exp((m - 1.0) * log4 + (1.0 - m) * log_L) * std::expm1(k) / k;
    out.W = std::pow(4.0, m);

    const auto ball_center = observation_offset(N, R);
    const double p = 1.0 / (m - 1.0);
    for (const auto& x : sample_ball(ball_center, R, kProfileSamples)) {
        const double sub = eval_rel_sub(0.0, x, out.params);
        const double datum = 0.5 * L * std::pow(euclidean_norm(x), p);
        if (sub > datum * (1.0 + kProfileRelTol) + 1e-300) {
            throw SynthesisError("relativistic subsolution exceeds the growth profile at t = 0");
        }
    }
    return out;
}

}  // namespace satwait
