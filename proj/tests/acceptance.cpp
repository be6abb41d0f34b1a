// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "oracles.hpp"
#include "satwait/bounds.hpp"
#include "satwait/solver.hpp"
#include "satwait/subsolutions.hpp"
#include "satwait/verify.hpp"

using namespace satwait;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Support excess over t + 2h collected from every speed-limited run below.
struct SupportLedger {
    double worst = -INFINITY;
    std::string where = "none";
    int runs = 0;
    void add(double excess, const std::string& run) {
        ++runs;
        if (excess > worst) {
            worst = excess;
            where = run;
        }
    }
};
SupportLedger support;

const ModelKind slpm2 = ModelKind::make(Equation::SpeedLimitedPM, 2.0, 1);
const ModelKind rel2 = ModelKind::make(Equation::RelativisticPM, 2.0, 1);

Outcome constants() {
    bool ok = true;
    std::string bad;
    for (const double m : {1.5, 2.0, 3.0, 4.0}) {
        const double W = upper_bound_T_u(1.0, 1, ModelKind::make(Equation::RelativisticPM, m, 1)).W;
        if (W != std::pow(4.0, m)) {
            ok = false;
            bad += fmt(" W(m=%g)=%.17g", m, W);
        }
    }
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> Nd(1, 4);
    std::uniform_real_distribution<double> Md(1.2, 4.0);
    for (int k = 0; k < 10; ++k) {
        const int N = Nd(rng);
        const double M = Md(rng);
        const double K = synthesize_m_params(1.0, 1.0, N, M).params.K;
        if (K != 2.0 * N * (M - 1.0)) {
            ok = false;
            bad += fmt(" K(N=%d,M=%g)=%.17g", N, M, K);
        }
    }
    return {ok, fmt("W(m=2)=%g, K = 2N(M-1) for 10 random (N,M)", upper_bound_T_u(1.0, 1, rel2).W) + bad};
}

Outcome certify_m_family() {
    bool ok = true;
    std::string detail;
    for (const auto& [L, R, N, M] : {std::tuple{1.0, 1.0, 1, 2.0}, std::tuple{1.0, 1.0, 2, 2.0}, std::tuple{2.0, 1.0, 1, 3.0}}) {
        const MSubParams p = synthesize_m_params(L, R, N, M).params;
        const CertificationReport rep = certify_M(p);
        const MValidity v = validate_m_params(p);
        const bool pass = rep.pass && v.valid() && rep.n_samples >= 200u * 200u;
        ok = ok && pass;
        detail += fmt(" (%g,%g,%d,%g): residual %.2e slacks %.2e/%.2e %s;", L, R, N, M, rep.max_residual,
                      v.slack_lower, v.slack_upper, pass ? "ok" : "FAILED");
    }
    return {ok, detail};
}

Outcome certify_rel_family() {
    bool ok = true;
    std::string detail;
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (const auto& [L, R, N, m] : {std::tuple{1.0, 1.0, 1, 2.0}, std::tuple{2.0, 1.0, 1, 2.0}, std::tuple{1.0, 1.0, 2, 3.0}}) {
        const RelSubParams p = synthesize_rel_params(L, R, N, m).params;
        const CertificationReport rep = certify_rel(p);
        bool pass = rep.pass && rep.max_residual <= 0.0 && rep.max_rh_defect <= 1e-5;

        // 20 random truncation pairs at random times, cross-checked by a Riemann sum
        double worst_lhs = -INFINITY, worst_quad = 0.0;
        for (int k = 0; k < 20;) {
            const double t = 0.95 * rel_time_window(p) * u01(rng);
            const double up = rel_jump_height(t, p);
            double a1 = up * u01(rng), b1 = up * 1.2 * u01(rng);
            double a2 = up * u01(rng), b2 = up * 1.2 * u01(rng);
            if (a1 > b1) std::swap(a1, b1);
            if (a2 > b2) std::swap(a2, b2);
            if (a1 <= 0.0 || a2 <= 0.0 || b1 - a1 < 1e-3 * up || b2 - a2 < 1e-3 * up) continue;
            ++k;
            const JumpCheck j = jump_check_rel(t, p, Truncation{a1, b1}, Truncation{a2, b2});
            const double ref = oracle::jump_lhs_riemann(j.u_plus, p.m, j.front_speed, a1, b1, a2, b2);
            worst_lhs = std::max(worst_lhs, j.lhs);
            worst_quad = std::max(worst_quad, std::abs(j.lhs - ref) / std::max(std::abs(ref), 1e-300));
            pass = pass && j.lhs <= 0.0 && j.rhs == 0.0;
        }
        pass = pass && worst_quad <= 1e-6;
        ok = ok && pass;
        detail += fmt(" (%g,%g,%d,%g): max G-gamma %.2e RH %.1e jump lhs<=%.2e (quad vs Riemann %.1e) %s;", L, R, N, m,
                      rep.max_residual, rep.max_rh_defect, worst_lhs, worst_quad, pass ? "ok" : "FAILED");
    }
    return {ok, detail};
}

Outcome gamma0_oracle() {
    const double g = gamma0(1, 2.0, 1.0, 1.0);
    const auto bf = oracle::brute_force_sup_G(1, 2.0, 0.5, 1.0 + std::log(2.0));
    const double rel = std::abs(g - bf.value) / bf.value;
    return {rel <= 0.01, fmt("gamma0=%.8f brute force=%.8f at (rho,y)=(%.4f,%.4f), relative difference %.2e", g,
                             bf.value, bf.rho, bf.y, rel)};
}

Outcome conservation() {
    auto grid = make_grid(1, 2.0, 1024);
    RadialSolver solver(slpm2);
    RunOptions opt;
    opt.max_steps = 10000;
    opt.support_speed_bound = 1.0;
    const RadialState s0 = init_state(grid, power_law_datum(1.0, 1.0, 0.5, 2.0));
    const RunResult res = run(solver, s0, 1e9, opt);
    support.add(res.max_support_excess, "conservation run");
    const double drift = std::abs(mass(res.state) - mass(s0)) / mass(s0);
    return {res.steps == 10000 && drift < 1e-10,
            fmt("%zu steps on 1024 cells to t=%.4f, relative mass drift %.2e", res.steps, res.state.t, drift)};
}

Outcome comparison() {
    // monotone step on random ordered pairs
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> val(0.0, 1.0), lift(0.0, 0.5);
    RadialSolver solver(slpm2);
    auto grid = make_grid(1, 1.0, 64);
    int violations = 0;
    for (int k = 0; k < 100; ++k) {
        RadialState u{grid, 0.0, std::vector<double>(64)};
        for (auto& x : u.values) x = val(rng);
        RadialState v = u;
        for (auto& x : v.values) x += lift(rng);
        const double dt = std::min(solver.admissible_dt(u), solver.admissible_dt(v));
        const RadialState su = solver.step(u, dt), sv = solver.step(v, dt);
        for (std::size_t i = 0; i < 64; ++i) violations += su.values[i] > sv.values[i];
    }

    MSubParams p = synthesize_m_params(1, 1, 1, 2).params;
    p.center = {0.0};
    ComparisonConfig cfg;
    cfg.cells = 1024;
    const ComparisonReport coarse = comparison_test(slpm2, radial_view(p), 0.05, cfg);
    cfg.cells = 2048;
    const ComparisonReport fine = comparison_test(slpm2, radial_view(p), 0.05, cfg);
    support.add(coarse.max_support_excess, "comparison 1024 cells");
    support.add(fine.max_support_excess, "comparison 2048 cells");
    const double vc = std::max(0.0, -coarse.min_gap), vf = std::max(0.0, -fine.min_gap);
    const bool ok = violations == 0 && coarse.min_gap >= -0.05 * coarse.umax && vf <= vc;
    return {ok, fmt("%d monotonicity violations in 100 pairs; min(u - u_sub) %.3e at 1024 cells, %.3e at 2048 "
                    "(bound -0.05 umax = %.3e) through t=%.4f",
                    violations, coarse.min_gap, fine.min_gap, -0.05 * coarse.umax, coarse.t_end)};
}

Outcome waiting_time() {
    auto grid = make_grid(1, 2.0, 1024);
    const std::vector<double> Ls = {1.0, 2.0, 4.0};
    WaitingTimeSetup setup;
    setup.t_max = 20.0;

    const ScalingStudy rel = scaling_study(rel2, Ls, [](double L) { return power_law_datum(L, 1.0, 0.5, 1.0); },
                                           grid, setup);
    bool ok = rel.conclusive;
    std::string detail = "rel t* =";
    for (const auto& pt : rel.points) {
        const double t = pt.report.t_star_measured;
        ok = ok && pt.report.reached && t > 0.0 && t <= 1.1 * 16.0 / pt.L;
        detail += fmt(" %.4f", t);
    }
    ok = ok && rel.slope >= -1.25 && rel.slope <= -0.75;
    detail += fmt(" (bound 17.6/L), slope %.3f", rel.slope);

    const ScalingStudy slpm = scaling_study(slpm2, Ls, [](double L) { return power_law_datum(L, 1.0, 0.5, 2.0); },
                                            grid, setup);
    ok = ok && slpm.conclusive && slpm.slope >= -1.25 && slpm.slope <= -0.75;
    detail += "; slpm t* =";
    for (const auto& pt : slpm.points) {
        detail += fmt(" %.4f", pt.report.t_star_measured);
        support.add(pt.report.max_support_excess, fmt("slpm waiting time L=%g", pt.L));
    }
    detail += fmt(", slope %.3f", slpm.slope);
    return {ok, detail};
}

Outcome finite_speed() {
    return {support.runs > 0 && support.worst <= 0.0,
            fmt("max over %d speed-limited runs of R(t)-R(0)-t-2h = %.3e (%s)", support.runs, support.worst,
                support.where.c_str())};
}

Outcome scaling_identities() {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double worst_m = 0.0, worst_rel = 0.0;
    int positive_m = 0, positive_rel = 0;

    // speed-limited family: s = U^{1-M} profile equals U^{-1} times the s = 1 profile at (lam t, lam x)
    const MSubParams base = synthesize_m_params(1.0, 1.0, 2, 2.5).params;
    for (int k = 0; k < 1000; ++k) {
        const double U = std::exp(2.0 * u01(rng) - 1.0);
        const double lam = std::pow(U, base.M - 1.0);
        const MSubParams unit = MSubParams::make(base.M, base.N, base.b, base.ell, base.K, base.w, 1.0, {0.0, 0.0});
        const MSubParams scaled =
            MSubParams::make(base.M, base.N, base.b, base.ell, base.K, base.w, 1.0 / lam, {0.0, 0.0});
        const double t = 0.99 * scaled.lifetime * u01(rng);
        const double B = scaled.s + scaled.w * t;
        const double x[] = {0.7 * B * (2 * u01(rng) - 1), 0.7 * B * (2 * u01(rng) - 1)};
        const double xs[] = {lam * x[0], lam * x[1]};
        const double lhs = eval_m_sub(t, x, scaled);
        const double rhs = eval_m_sub(lam * t, xs, unit) / U;
        if (lhs > 0.0) ++positive_m;
        worst_m = std::max(worst_m, std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300));
    }

    // relativistic family: amplitude U equals U times the amplitude-1 profile at time U^{m-1} t
    RelSubParams unit = synthesize_rel_params(1.0, 1.0, 2, 2.5).params;
    unit.U = 1.0;
    unit.center = {0.0, 0.0};
    for (int k = 0; k < 1000; ++k) {
        RelSubParams scaled = unit;
        scaled.U = std::exp(2.0 * u01(rng) - 1.0);
        const double lam = std::pow(scaled.U, unit.m - 1.0);
        const double t = 0.99 * rel_time_window(scaled) * u01(rng);
        const double r = front_radius_rel(t, scaled);
        const double x[] = {0.7 * r * (2 * u01(rng) - 1), 0.7 * r * (2 * u01(rng) - 1)};
        const double lhs = eval_rel_sub(t, x, scaled);
        const double rhs = scaled.U * eval_rel_sub(lam * t, x, unit);
        if (lhs > 0.0) ++positive_rel;
        worst_rel = std::max(worst_rel, std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300));
    }
    const bool ok = worst_m <= 1e-12 && worst_rel <= 1e-12 && positive_m > 500 && positive_rel > 500;
    return {ok, fmt("max relative defect %.2e (speed-limited, %d/1000 inside the support), %.2e (relativistic, "
                    "%d/1000)",
                    worst_m, positive_m, worst_rel, positive_rel)};
}

}  // namespace

int main() {
    // criterion 8 reads the ledger filled by 5, 6 and 7, so it runs after them
    const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
        {1, constants},    {2, certify_m_family}, {3, certify_rel_family}, {4, gamma0_oracle}, {5, conservation},
        {6, comparison},   {7, waiting_time},     {8, finite_speed},       {9, scaling_identities},
    };
    int failed = 0;
    for (const auto& [id, fn] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s criterion %d (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", id, secs, o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
