#include "satwait/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "satwait/errors.hpp"
#include "satwait/quadrature.hpp"

namespace satwait {

// --- speed-limited family ------------------------------------------------------
//
// With B = s + w t, A^{M-1} = b (ell/s - 1/B) and f(z) = (1 - |z|^2)^{1/(M-1)},
// the profile is u = f(x/B) / A, and
//   u_t = -A'/A^2 f - B'/(A B) (z . grad f),
//   div = -2 (z . grad f) / (A^M B^2 D) - 2 N f / (A^M B^2 D^3) (1 + (N-1)/N X),
// where X = 4|z|^2 / (A^{2M-2} B^2), D = sqrt(1 + X) and z . grad f = -2|z|^2 f^{2-M}/(M-1).

namespace {

struct MFrame {
    double A, dA, B, dB;
};

MFrame m_frame(double t, const MSubParams& p) {
    MFrame fr;
    fr.B = p.s + p.w * t;
    fr.dB = p.w;
    const double AM1 = p.b * (p.ell / p.s - 1.0 / fr.B);
    fr.A = std::pow(AM1, 1.0 / (p.M - 1.0));
    const double dAM1 = p.b * p.w / (fr.B * fr.B);
    fr.dA = dAM1 / ((p.M - 1.0) * std::pow(fr.A, p.M - 2.0));
    return fr;
}

}  // namespace

BulkResidualM bulk_residual_M(double t, double y, const MSubParams& p) {
    if (!(t >= 0.0) || !(t < p.lifetime)) throw DomainError("bulk_residual_M: time outside the lifetime");
    const MFrame fr = m_frame(t, p);
    if (!(y >= 0.0) || !(y < fr.B)) throw DomainError("bulk_residual_M: point outside the support");

    const double M = p.M;
    const double N = p.N;
    const double z = y / fr.B;
    const double z2 = z * z;
    const double base = 1.0 - z2;
    const double f = std::pow(base, 1.0 / (M - 1.0));
    const double zgradf = -2.0 * z2 * std::pow(base, (2.0 - M) / (M - 1.0)) / (M - 1.0);
    const double AM = std::pow(fr.A, M);
    const double AB2 = std::pow(fr.A, 2.0 * M - 2.0) * fr.B * fr.B;
    const double X = 4.0 * z2 / AB2;
    const double D = std::sqrt(1.0 + X);
    const double scale = AM * fr.B * fr.B;

    BulkResidualM r;
    r.u_t = -fr.dA / (fr.A * fr.A) * f - fr.dB / (fr.A * fr.B) * zgradf;
    r.div = -2.0 * zgradf / (scale * D) - 2.0 * N * f / (scale * D * D * D) * (1.0 + (N - 1.0) / N * X);
    r.residual = r.u_t - r.div;
    r.tolerance = 1e-8 * (1.0 + std::abs(r.u_t) + std::abs(r.div));
    const MValidity v = validate_m_params(p);
    r.slack_lower = v.slack_lower;
    r.slack_upper = v.slack_upper;
    return r;
}

double bulk_residual_M_axis(double t, const MSubParams& p) {
    if (!(t >= 0.0) || !(t < p.lifetime)) throw DomainError("bulk_residual_M_axis: time outside the lifetime");
    const MFrame fr = m_frame(t, p);
    return -fr.dA / (fr.A * fr.A) + 2.0 * p.N / (std::pow(fr.A, p.M) * fr.B * fr.B);
}

// --- relativistic family -------------------------------------------------------

double bulk_residual_rel(double t, double x_norm, const RelSubParams& p) {
    if (!(t >= 0.0) || !(t < rel_time_window(p))) throw DomainError("bulk_residual_rel: time outside the horizon");
    const double r = front_radius_rel(t, p);
    if (!(x_norm >= 0.0) || !(x_norm < r)) throw DomainError("bulk_residual_rel: point outside the support");
    return p.gamma - bulk_gamma_requirement(r, x_norm, p.N, p.m);
}

double Truncation::operator()(double s) const {
    return std::max(std::min(b, s), a) - a;
}

double Truncation::derivative(double s) const {
    return (s > a && s < b) ? 1.0 : 0.0;
}

namespace {

void check_truncation(const Truncation& T) {
    if (!(T.a > 0.0) || !(T.b > T.a)) throw DomainError("truncation needs 0 < a < b");
}

}  // namespace

JumpCheck jump_check_rel(double t, const RelSubParams& p, Truncation T, Truncation S,
                         std::optional<double> front_speed) {
    check_truncation(T);
    check_truncation(S);
    JumpCheck jc;
    jc.u_plus = rel_jump_height(t, p);
    const double m = p.m;
    jc.front_speed = front_speed ? *front_speed : std::pow(jc.u_plus, m - 1.0);
    const double rp = jc.front_speed;

    auto integrand = [&](double s) {
        const double dST = S.derivative(s) * T(s) + S(s) * T.derivative(s);
        if (dST == 0.0) return 0.0;
        return dST * s * (std::pow(s, m - 1.0) - rp);
    };
    const double breaks[] = {T.a, T.b, S.a, S.b};
    const auto q = integrate_adaptive(integrand, 0.0, jc.u_plus, breaks, 1e-15, 1e-13);
    jc.lhs = q.value;
    jc.quadrature_error = q.error_estimate;
    const double up = jc.u_plus;
    jc.rhs = up * T(up) * S(up) * (std::pow(up, m - 1.0) - rp);
    return jc;
}

double rankine_hugoniot_defect(double tau, const RelSubParams& p, double h) {
    const double lo = std::max(0.0, tau - h);
    const double hi = tau + h;
    const double slope = (rel_radius_unscaled(hi, p) - rel_radius_unscaled(lo, p)) / (hi - lo);
    return std::abs(slope - std::pow(rel_amplitude(tau, p), 1.0 - p.m));
}

// --- certification -------------------------------------------------------------

CertificationReport certify_M(const MSubParams& p, const CertificationOptions& opt) {
    CertificationReport rep;
    rep.family = "M";
    const MValidity v = validate_m_params(p);
    rep.min_slack = std::min(v.slack_lower, v.slack_upper);
    rep.max_residual = -std::numeric_limits<double>::infinity();
    double worst_excess = -std::numeric_limits<double>::infinity();
    bool bulk_ok = true;
    for (int i = 0; i < opt.time_samples; ++i) {
        const double t = p.lifetime * (i + 1.0) / (opt.time_samples + 1.0);
        const double B = p.s + p.w * t;
        for (int j = 0; j < opt.space_samples; ++j) {
            const double y = (1.0 - opt.boundary_band) * B * j / (opt.space_samples - 1.0);
            const BulkResidualM r = bulk_residual_M(t, y, p);
            ++rep.n_samples;
            rep.max_residual = std::max(rep.max_residual, r.residual);
            const double excess = r.residual - r.tolerance;
            if (excess > 0.0) bulk_ok = false;
            if (excess > worst_excess) {
                worst_excess = excess;
                rep.worst_t = t;
                rep.worst_y = y;
            }
        }
    }
    rep.pass = bulk_ok && v.valid();
    return rep;
}

CertificationReport certify_rel(const RelSubParams& p, const CertificationOptions& opt) {
    CertificationReport rep;
    rep.family = "rel";
    const double window = rel_time_window(p);
    rep.max_residual = -std::numeric_limits<double>::infinity();
    const double bulk_tol = 1e-10 * (1.0 + p.gamma);
    bool bulk_ok = true;
    for (int i = 0; i < opt.time_samples; ++i) {
        const double t = window * i / static_cast<double>(opt.time_samples);
        const double r = front_radius_rel(t, p);
        for (int j = 0; j < opt.space_samples; ++j) {
            const double y = (1.0 - opt.boundary_band) * r * j / (opt.space_samples - 1.0);
            const double excess = -bulk_residual_rel(t, y, p);
            ++rep.n_samples;
            if (excess > rep.max_residual) {
                rep.max_residual = excess;
                rep.worst_t = t;
                rep.worst_y = y;
            }
            if (excess > bulk_tol) bulk_ok = false;
        }
    }

    rep.max_rh_defect = 0.0;
    for (int i = 0; i < opt.time_samples; ++i) {
        const double tau = p.horizon * (i + 0.5) / opt.time_samples;
        rep.max_rh_defect = std::max(rep.max_rh_defect, rankine_hugoniot_defect(tau, p));
    }

    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    rep.min_slack = std::numeric_limits<double>::infinity();
    bool jump_ok = true;
    for (int k = 0; k < opt.truncation_pairs; ++k) {
        const double t = window * unit(rng);
        const double up = rel_jump_height(t, p);
        auto draw = [&](bool near_top) {
            double a = up * (0.05 + 0.9 * unit(rng));
            double b = near_top ? up * (0.98 + 0.04 * unit(rng)) : a + (1.2 * up - a) * unit(rng);
            if (b <= a) b = a + 1e-3 * up;
            return Truncation{a, b};
        };
        const Truncation T = draw(k % 4 == 0);
        const Truncation S = draw(k % 4 == 1);
        const JumpCheck jc = jump_check_rel(t, p, T, S);
        const double slack = jc.rhs - jc.lhs;
        rep.min_slack = std::min(rep.min_slack, slack);
        if (slack < -opt.quad_tol) jump_ok = false;
    }

    rep.pass = bulk_ok && jump_ok && rep.max_rh_defect <= opt.rh_tol;
    return rep;
}

// --- comparison -------------------------------------------------------------------

RadialSubsolution radial_view(const MSubParams& p) {
    return RadialSubsolution{[p](double t, double r) { return eval_m_sub_radial(t, r, p); }, p.lifetime};
}

RadialSubsolution radial_view(const RelSubParams& p) {
    return RadialSubsolution{[p](double t, double r) { return eval_rel_sub_radial(t, r, p); },
                             rel_time_window(p)};
}

RadialSubsolution zero_subsolution(double lifetime) {
    return RadialSubsolution{[](double, double) { return 0.0; }, lifetime};
}

ComparisonReport comparison_test(const ModelKind& model, const RadialSubsolution& sub, double margin,
                                 const ComparisonConfig& cfg) {
    if (!(margin >= 0.0)) throw ConfigError("comparison_test: margin must be nonnegative");
    if (!(cfg.window > 0.0) || cfg.window >= 1.0) throw ConfigError("comparison_test: window must lie in (0, 1)");
    auto grid = make_grid(model.dimension, cfg.r_max, cfg.cells);
    if (sub.eval(0.0, cfg.r_max) > 0.0) throw ConfigError("comparison_test: subsolution not supported inside r_max");

    const double scale = 1.0 + margin;
    Datum datum{[&](double r) { return scale * sub.eval(0.0, r); }, cfg.r_max, "scaled subsolution"};
    RadialState s0 = init_state(grid, datum);

    ComparisonReport rep;
    rep.umax = max_value(s0);
    rep.t_end = cfg.window * sub.lifetime;
    rep.min_gap = std::numeric_limits<double>::infinity();
    rep.min_gap_on_support = std::numeric_limits<double>::infinity();
    rep.min_gap_at_start = std::numeric_limits<double>::infinity();

    RunOptions opt;
    for (int k = 1; k <= cfg.output_times; ++k) opt.snapshot_times.push_back(rep.t_end * k / cfg.output_times);
    opt.on_snapshot = [&](const RadialState& s) {
        for (int i = 0; i < grid->cells(); ++i) {
            const double r = grid->midpoint(i);
            const double below = sub.eval(s.t, r);
            const double gap = s.values[static_cast<std::size_t>(i)] - below;
            if (below > 0.0) {
                rep.min_gap_on_support = std::min(rep.min_gap_on_support, gap);
                if (s.t == 0.0) rep.min_gap_at_start = std::min(rep.min_gap_at_start, gap);
            }
            if (gap < rep.min_gap) {
                rep.min_gap = gap;
                rep.at_t = s.t;
                rep.at_r = r;
            }
        }
    };
    if (model.kind == Equation::SpeedLimitedPM) {
        opt.support_speed_bound = 1.0;
        opt.support_threshold = 1e-8 * rep.umax;
    }
    RadialSolver solver(model, cfg.scheme);
    RunResult res = run(solver, std::move(s0), rep.t_end, opt);
    rep.steps = res.steps;
    rep.max_support_excess = res.max_support_excess;
    return rep;
}

}  // namespace satwait
