#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "satwait/errors.hpp"
#include "satwait/model.hpp"
#include "satwait/subsolutions.hpp"
#include "satwait/verify.hpp"

using namespace satwait;

namespace {

RelSubParams rel_params(double gamma, double r0, double U, double m = 2.0, int N = 1) {
    RelSubParams p;
    p.m = m;
    p.N = N;
    p.gamma = gamma;
    p.r0 = r0;
    p.U = U;
    p.center.assign(static_cast<std::size_t>(N), 0.0);
    p.horizon = 64.0;
    return p;
}

}  // namespace

TEST_CASE("M bulk terms agree with finite differences of the profile and the model flux") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (const auto& inst : {std::tuple{1.0, 1.0, 1, 2.0}, std::tuple{1.0, 1.0, 2, 2.0}, std::tuple{2.0, 1.0, 1, 3.0},
                             std::tuple{1.0, 2.0, 3, 1.7}}) {
        const auto [L, R, N, M] = inst;
        const MSubParams p = synthesize_m_params(L, R, N, M).params;
        for (int k = 0; k < 40; ++k) {
            const double t = 0.9 * p.lifetime * u01(rng);
            const double B = p.s + p.w * t;
            const double y = B * (0.05 + 0.8 * u01(rng));
            const BulkResidualM r = bulk_residual_M(t, y, p);

            const double ht = 1e-5 * p.lifetime;
            const double ut = (eval_m_sub_radial(t + ht, y, p) - eval_m_sub_radial(t - ht, y, p)) / (2 * ht);
            const double hin = 1e-6 * B, hout = 1e-4 * B;
            auto a = [&](double x) {
                const double u = eval_m_sub_radial(t, x, p);
                const double ur = (eval_m_sub_radial(t, x + hin, p) - eval_m_sub_radial(t, x - hin, p)) / (2 * hin);
                return flux_slpm(u, ur, M);
            };
            const double div = oracle::radial_divergence(a, y, N, hout);
            const double scale = 1.0 + std::abs(r.u_t) + std::abs(r.div);
            CHECK(std::abs(r.u_t - ut) <= 1e-5 * scale);
            CHECK(std::abs(r.div - div) <= 1e-4 * scale);
        }
    }
}

TEST_CASE("M residual on the axis matches its reduced form") {
    for (const auto& p : {synthesize_m_params(1, 1, 1, 2).params, synthesize_m_params(1, 1, 2, 2).params,
                          synthesize_m_params(2, 1, 1, 3).params}) {
        for (const double f : {0.0, 0.3, 0.8}) {
            const double t = f * p.lifetime;
            const double scale = 1 + std::abs(bulk_residual_M(t, 0.0, p).u_t);
            CHECK(bulk_residual_M(t, 0.0, p).residual ==
                  doctest::Approx(bulk_residual_M_axis(t, p)).epsilon(1e-12).scale(scale));
        }
    }
}

TEST_CASE("M residual domain errors") {
    const MSubParams p = synthesize_m_params(1, 1, 1, 2).params;
    CHECK_THROWS_AS(bulk_residual_M(p.lifetime, 0.1, p), DomainError);
    CHECK_THROWS_AS(bulk_residual_M(0.0, p.s, p), DomainError);
    CHECK_THROWS_AS(bulk_residual_M(-1.0, 0.1, p), DomainError);
}

TEST_CASE("M certification passes for synthesized parameters") {
    for (const auto& inst : {std::tuple{1.0, 1.0, 1, 2.0}, std::tuple{1.0, 1.0, 2, 2.0}, std::tuple{2.0, 1.0, 1, 3.0}}) {
        const auto [L, R, N, M] = inst;
        const CertificationReport rep = certify_M(synthesize_m_params(L, R, N, M).params);
        CHECK(rep.pass);
        CHECK(rep.family == "M");
        CHECK(rep.n_samples == 40000);
        CHECK(rep.min_slack >= 0.0);
    }
}

TEST_CASE("a front speed above the window breaks the bulk inequality") {
    MSubParams p = synthesize_m_params(1, 1, 1, 2).params;
    p = MSubParams::make(p.M, p.N, p.b, p.ell, p.K, 1.1 * m_speed_upper(p.b, p.ell, p.K), p.s, p.center);
    CHECK(validate_m_params(p).slack_upper < 0.0);
    bool violated = false;
    for (int i = 0; i < 200 && !violated; ++i) {
        const double t = p.lifetime * i / 200.0;
        const double B = p.s + p.w * t;
        for (int j = 0; j < 200; ++j) {
            const BulkResidualM r = bulk_residual_M(t, B * (1 - 1e-3) * j / 199.0, p);
            if (r.residual > r.tolerance) {
                violated = true;
                break;
            }
        }
    }
    CHECK(violated);
    const CertificationReport rep = certify_M(p);
    CHECK_FALSE(rep.pass);
    CHECK(rep.max_residual > 0.0);
}

TEST_CASE("rel bulk residual examples") {
    const RelSubParams p = rel_params(2.0, 1.0, 1.0);
    CHECK(bulk_residual_rel(0.0, 0.0, p) == doctest::Approx(0.5).epsilon(1e-14));
    // at the argmax of G with gamma = gamma0 the residual vanishes
    const Gamma0Result g = gamma0_search(1, 2.0, 1.0, 1.0);
    const RelSubParams q = rel_params(g.gamma0, g.arg_rho, 1.0);
    CHECK(std::abs(bulk_residual_rel(0.0, g.arg_y, q)) < 1e-9);
    // near the front G is negative
    CHECK(bulk_residual_rel(0.0, 0.99999, p) > p.gamma);
    CHECK_THROWS_AS(bulk_residual_rel(0.0, 1.0, p), DomainError);
}

TEST_CASE("G is the critical gamma of the bulk inequality for the model flux") {
    // At tau = 0 the radius and amplitude do not depend on gamma, and u_t - div is
    // affine in gamma; its root must be G(r0, y).
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (const auto& inst : {std::tuple{1, 2.0}, std::tuple{2, 2.0}, std::tuple{3, 3.0}, std::tuple{1, 1.6}}) {
        const auto [N, m] = inst;
        for (int k = 0; k < 10; ++k) {
            const double r0 = 0.3 + 1.5 * u01(rng);
            const double y = r0 * (0.05 + 0.85 * u01(rng));
            auto residual = [&](double gamma) {
                const RelSubParams p = rel_params(gamma, r0, 1.0, m, N);
                const double h = 1e-5;
                const double v0 = eval_rel_sub_radial(0.0, y, p);
                const double ut =
                    (-3 * v0 + 4 * eval_rel_sub_radial(h, y, p) - eval_rel_sub_radial(2 * h, y, p)) / (2 * h);
                const double hin = 1e-6 * r0, hout = 1e-4 * r0;
                auto a = [&](double x) {
                    const double u = eval_rel_sub_radial(0.0, x, p);
                    const double ur = (eval_rel_sub_radial(0.0, x + hin, p) - eval_rel_sub_radial(0.0, x - hin, p)) /
                                      (2 * hin);
                    return flux_rel_pm(u, ur, m);
                };
                return ut - oracle::radial_divergence(a, y, N, hout);
            };
            const double g1 = 1.0, g2 = 5.0;
            const double f1 = residual(g1), f2 = residual(g2);
            CHECK(f2 < f1);  // larger gamma helps
            const double root = g1 - f1 * (g2 - g1) / (f2 - f1);
            CHECK(root == doctest::Approx(bulk_gamma_requirement(r0, y, N, m)).epsilon(1e-4).scale(1.0));
        }
    }
}

TEST_CASE("jump inequality") {
    // u+ = U / A(0) = 0.5 for m = 2
    const RelSubParams p = rel_params(2.0, 0.5, 0.5);
    const Truncation T{0.1, 0.4};
    const JumpCheck j = jump_check_rel(0.0, p, T, T);
    CHECK(j.u_plus == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(j.rhs == 0.0);
    CHECK(j.lhs < 0.0);
    const double ref = oracle::jump_lhs_riemann(0.5, 2.0, j.front_speed, 0.1, 0.4, 0.1, 0.4);
    CHECK(j.lhs == doctest::Approx(ref).epsilon(1e-6));

    // vanishing truncation width
    const JumpCheck thin = jump_check_rel(0.0, p, Truncation{0.2, 0.2 + 1e-9}, Truncation{0.2, 0.2 + 1e-9});
    CHECK(std::abs(thin.lhs) < 1e-15);

    // a slower front than Rankine-Hugoniot makes rhs nonzero
    const JumpCheck slow = jump_check_rel(0.0, p, T, T, 0.25);
    CHECK(slow.rhs != 0.0);

    CHECK_THROWS_AS(jump_check_rel(0.0, p, Truncation{0.3, 0.2}, T), DomainError);
    CHECK_THROWS_AS(jump_check_rel(0.0, p, Truncation{0.0, 0.2}, T), DomainError);
}

TEST_CASE("jump quadrature matches a Riemann sum on random truncation pairs") {
    const RelSynthesis syn = synthesize_rel_params(1.0, 1.0, 1, 2.0);
    const RelSubParams& p = syn.params;
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double t = 0.3 * rel_time_window(p);
    for (int k = 0; k < 20; ++k) {
        const double up = rel_jump_height(t, p);
        double a1 = up * u01(rng), b1 = up * 1.2 * u01(rng);
        double a2 = up * u01(rng), b2 = up * 1.2 * u01(rng);
        if (a1 > b1) std::swap(a1, b1);
        if (a2 > b2) std::swap(a2, b2);
        if (b1 - a1 < 1e-3 * up || b2 - a2 < 1e-3 * up || a1 <= 0 || a2 <= 0) continue;
        const JumpCheck j = jump_check_rel(t, p, Truncation{a1, b1}, Truncation{a2, b2});
        const double ref = oracle::jump_lhs_riemann(j.u_plus, p.m, j.front_speed, a1, b1, a2, b2);
        CHECK(j.lhs == doctest::Approx(ref).epsilon(1e-6).scale(std::abs(ref)));
        CHECK(j.lhs <= j.rhs + 1e-10);
    }
}

TEST_CASE("Rankine-Hugoniot identity along the trajectory") {
    const RelSubParams p = synthesize_rel_params(1.0, 1.0, 1, 2.0).params;
    for (int k = 0; k <= 20; ++k) CHECK(rankine_hugoniot_defect(p.horizon * k / 21.0, p) <= 1e-5);
}

TEST_CASE("rel certification passes for synthesized parameters") {
    for (const auto& inst : {std::tuple{1.0, 1.0, 1, 2.0}, std::tuple{2.0, 1.0, 1, 2.0}, std::tuple{1.0, 1.0, 2, 3.0}}) {
        const auto [L, R, N, m] = inst;
        const CertificationReport rep = certify_rel(synthesize_rel_params(L, R, N, m).params);
        CHECK(rep.pass);
        CHECK(rep.max_residual <= 0.0);
        CHECK(rep.max_rh_defect <= 1e-5);
        CHECK(rep.min_slack >= -1e-10);
    }
    // gamma below gamma0 must fail
    RelSubParams bad = synthesize_rel_params(1.0, 1.0, 1, 2.0).params;
    bad.gamma = 1.0;
    CHECK_FALSE(certify_rel(bad).pass);
}

TEST_CASE("comparison against the zero subsolution") {
    const ModelKind model = ModelKind::make(Equation::SpeedLimitedPM, 2.0, 1);
    ComparisonConfig cfg;
    cfg.cells = 128;
    const ComparisonReport rep = comparison_test(model, zero_subsolution(1.0), 0.0, cfg);
    CHECK(rep.min_gap == 0.0);
    CHECK(rep.min_gap_on_support == INFINITY);
}

TEST_CASE("comparison with a large margin stays ordered") {
    const ModelKind model = ModelKind::make(Equation::SpeedLimitedPM, 2.0, 1);
    MSubParams p = synthesize_m_params(1, 1, 1, 2).params;
    p.center = {0.0};
    ComparisonConfig cfg;
    cfg.cells = 256;
    const ComparisonReport rep = comparison_test(model, radial_view(p), 9.0, cfg);
    CHECK(rep.min_gap_at_start > 0.0);
    CHECK(rep.min_gap >= -1e-12);
}

TEST_CASE("comparison violation does not grow under refinement") {
    const ModelKind model = ModelKind::make(Equation::SpeedLimitedPM, 2.0, 1);
    MSubParams p = synthesize_m_params(1, 1, 1, 2).params;
    p.center = {0.0};
    ComparisonConfig cfg;
    cfg.cells = 256;
    const ComparisonReport coarse = comparison_test(model, radial_view(p), 0.05, cfg);
    cfg.cells = 512;
    const ComparisonReport fine = comparison_test(model, radial_view(p), 0.05, cfg);
    CHECK(coarse.min_gap >= -0.05 * coarse.umax);
    CHECK(std::max(0.0, -fine.min_gap) <= std::max(0.0, -coarse.min_gap));
}

TEST_CASE("comparison rejects bad inputs") {
    const ModelKind model = ModelKind::make(Equation::SpeedLimitedPM, 2.0, 1);
    MSubParams p = synthesize_m_params(1, 1, 1, 2).params;
    p.center = {0.0};
    ComparisonConfig cfg;
    CHECK_THROWS_AS(comparison_test(model, radial_view(p), -0.1, cfg), ConfigError);
    cfg.r_max = 0.5;
    CHECK_THROWS_AS(comparison_test(model, radial_view(p), 0.0, cfg), ConfigError);
}
