#include "satwait/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "satwait/bounds.hpp"
#include "satwait/errors.hpp"

namespace satwait {

// --- grid --------------------------------------------------------------------

RadialGrid::RadialGrid(int dimension, double r_max, int cells)
    : dimension_(dimension), r_max_(r_max), cells_(cells), h_(r_max / cells) {
    if (dimension < 1) throw ConfigError("grid dimension must be >= 1");
    if (!(r_max > 0.0) || !std::isfinite(r_max)) throw ConfigError("grid r_max must be positive");
    if (cells < 8) throw ConfigError("grid needs at least 8 cells");
    const double omega = sphere_area_constant(dimension);
    volume_.resize(static_cast<std::size_t>(cells));
    area_.resize(static_cast<std::size_t>(cells) + 1);
    for (int i = 0; i <= cells; ++i) {
        area_[static_cast<std::size_t>(i)] = omega * std::pow(edge(i), dimension - 1);
    }
    for (int i = 0; i < cells; ++i) {
        const double lo = std::pow(edge(i), dimension);
        const double hi = std::pow(edge(i + 1), dimension);
        volume_[static_cast<std::size_t>(i)] = omega * (hi - lo) / dimension;
    }
}

double RadialGrid::sphere_area_constant(int dimension) {
    if (dimension == 1) return 1.0;
    const double half = 0.5 * dimension;
    return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

double RadialGrid::total_volume() const {
    return sphere_area_constant(dimension_) * std::pow(r_max_, dimension_) / dimension_;
}

int RadialGrid::cell_of(double r) const {
    if (r < 0.0) return 0;
    const int i = static_cast<int>(std::floor(r / h_ + 1e-12));
    return std::min(i, cells_ - 1);
}

GridPtr make_grid(int dimension, double r_max, int cells) {
    return std::make_shared<const RadialGrid>(dimension, r_max, cells);
}

// --- state helpers -----------------------------------------------------------

double mass(const RadialState& s) {
    double m = 0.0;
    for (int i = 0; i < s.grid->cells(); ++i) m += s.values[static_cast<std::size_t>(i)] * s.grid->volume(i);
    return m;
}

double max_value(const RadialState& s) {
    return s.values.empty() ? 0.0 : *std::max_element(s.values.begin(), s.values.end());
}

double support_radius(const RadialState& s, double threshold) {
    for (int i = s.grid->cells() - 1; i >= 0; --i) {
        if (s.values[static_cast<std::size_t>(i)] > threshold) return s.grid->edge(i + 1);
    }
    return 0.0;
}

// --- data --------------------------------------------------------------------

Datum zero_datum() {
    return Datum{[](double) { return 0.0; }, 0.0, "zero"};
}

Datum indicator_datum(double height, double radius) {
    if (!(height >= 0.0) || !(radius >= 0.0)) throw ConfigError("indicator datum: negative height or radius");
    return Datum{[=](double r) { return r < radius ? height : 0.0; }, radius, "indicator"};
}

Datum bump_datum(double height, double radius, double power) {
    if (!(height >= 0.0) || !(radius > 0.0) || !(power > 0.0)) {
        throw ConfigError("bump datum: need height >= 0, radius > 0, power > 0");
    }
    return Datum{[=](double r) {
                     const double z = r / radius;
                     return z < 1.0 ? height * std::pow(1.0 - z * z, power) : 0.0;
                 },
                 radius, "bump"};
}

Datum power_law_datum(double L, double edge, double cap, double power) {
    if (!(L >= 0.0) || !(edge > 0.0) || !(cap > 0.0) || !(power > 0.0)) {
        throw ConfigError("power-law datum: need L >= 0 and positive edge, cap, power");
    }
    return Datum{[=](double r) {
                     const double d = edge - r;
                     return d > 0.0 ? L * std::pow(std::min(d, cap), power) : 0.0;
                 },
                 edge, "power_law"};
}

RadialState init_state(const GridPtr& grid, const Datum& datum) {
    if (datum.support > grid->r_max()) {
        throw ConfigError("datum support " + std::to_string(datum.support) + " exceeds r_max " +
                          std::to_string(grid->r_max()));
    }
    RadialState s{grid, 0.0, std::vector<double>(static_cast<std::size_t>(grid->cells()))};
    for (int i = 0; i < grid->cells(); ++i) {
        const double v = datum.profile(grid->midpoint(i));
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ConfigError("datum is negative or non-finite at r = " + std::to_string(grid->midpoint(i)));
        }
        s.values[static_cast<std::size_t>(i)] = v;
    }
    return s;
}

// --- scheme ------------------------------------------------------------------

namespace {

// z^e with a multiplication fast path for small integer exponents.
struct Power {
    double e;
    int k;  // e when e is an integer in [0, 6], else -1

    explicit Power(double exponent) : e(exponent), k(-1) {
        const double r = std::round(exponent);
        if (r == exponent && r >= 0.0 && r <= 6.0) k = static_cast<int>(r);
    }

    double operator()(double z) const {
        if (k < 0) return z > 0.0 ? std::pow(z, e) : (e == 0.0 ? 1.0 : 0.0);
        double p = 1.0;
        for (int i = 0; i < k; ++i) p *= z;
        return p;
    }
};

struct FaceKernel {
    Equation kind;
    double exponent;
    Power pow_m;    // z^m              (relativistic)
    Power pow_m1;   // z^{e-1}          (both)
    Power pow_m2;   // z^{M-2}          (speed-limited)
    double lip_z_slpm;

    explicit FaceKernel(const ModelKind& m)
        : kind(m.kind),
          exponent(m.exponent),
          pow_m(m.exponent),
          pow_m1(m.exponent - 1.0),
          pow_m2(m.exponent - 2.0),
          lip_z_slpm(std::max(1.0, m.exponent - 1.0)) {}

    double flux(double z, double g) const {
        if (g == 0.0 || z <= 0.0) return 0.0;
        if (kind == Equation::RelativisticPM) {
            // Scaled so that z^2 + g^2 cannot underflow to zero.
            const double ag = std::abs(g);
            if (ag >= z) {
                const double r = z / ag;
                return std::copysign(pow_m(z) / std::sqrt(1.0 + r * r), g);
            }
            const double r = g / z;
            return pow_m(z) * r / std::sqrt(1.0 + r * r);
        }
        if (z < 1e-300) return 0.0;
        const double q = (exponent - 1.0) * pow_m2(z) * g;
        return z * q / std::sqrt(1.0 + q * q);
    }

    // Bounds of |da/dz| and da/dg over [0, umax]; u1 = umax^{e-1}.
    double lip_z(double u1) const {
        return kind == Equation::RelativisticPM ? exponent * u1 : lip_z_slpm;
    }
    double lip_g(double u1) const {
        return kind == Equation::RelativisticPM ? u1 : (exponent - 1.0) * u1;
    }
    double front_speed(double u1) const {
        return kind == Equation::RelativisticPM ? u1 : 1.0;
    }
};

}  // namespace

RadialSolver::RadialSolver(ModelKind model, SchemeOptions options)
    : model_(model), options_(options) {
    if (!(options_.cfl > 0.0) || options_.cfl > 1.0) throw ConfigError("cfl must lie in (0, 1]");
}

// Writes interface fluxes (face i between cells i-1 and i; faces 0 and n are
// walls) and returns the monotonicity bound on dt.
double RadialSolver::compute_fluxes(const RadialState& s, std::vector<double>& flux) const {
    const RadialGrid& g = *s.grid;
    const int n = g.cells();
    const double inv_h = 1.0 / g.h();
    const FaceKernel k(model_);
    const bool rusanov = options_.flux == NumericalFlux::Rusanov;
    const double lambda_slope = std::max(1.0, model_.exponent);

    flux.assign(static_cast<std::size_t>(n) + 1, 0.0);
    // speed[i]: bound on |dF_i/du| for either neighbour.
    thread_local std::vector<double> speed;
    speed.assign(static_cast<std::size_t>(n) + 1, 0.0);

    const double* u = s.values.data();
    for (int f = 1; f < n; ++f) {
        const double ul = u[f - 1];
        const double ur = u[f];
        const double umax = std::max(ul, ur);
        if (umax <= 0.0) continue;
        const double grad = (ur - ul) * inv_h;
        const double u1 = k.pow_m1(umax);
        double F;
        double c;
        if (rusanov) {
            const double lambda = std::max(k.front_speed(u1), 0.5 * k.lip_z(u1));
            F = k.flux(0.5 * (ul + ur), grad) + lambda * (ur - ul);
            c = 0.5 * k.lip_z(u1) + lambda_slope * lambda + k.lip_g(u1) * inv_h;
        } else {
            F = k.flux(umax, grad);
            c = k.lip_z(u1) + k.lip_g(u1) * inv_h;
        }
        flux[static_cast<std::size_t>(f)] = F;
        speed[static_cast<std::size_t>(f)] = c;
    }

    double bound = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double rate = g.face_area(i) * speed[static_cast<std::size_t>(i)] +
                            g.face_area(i + 1) * speed[static_cast<std::size_t>(i) + 1];
        if (rate > 0.0) bound = std::min(bound, g.volume(i) / rate);
    }
    return bound;
}

void RadialSolver::apply(RadialState& s, const std::vector<double>& flux, double dt) const {
    const RadialGrid& g = *s.grid;
    const int n = g.cells();
    double* u = s.values.data();
    for (int i = 0; i < n; ++i) {
        const double net = g.face_area(i + 1) * flux[static_cast<std::size_t>(i) + 1] -
                           g.face_area(i) * flux[static_cast<std::size_t>(i)];
        u[i] += dt * net / g.volume(i);
    }
    s.t += dt;
}

double RadialSolver::stability_bound(const RadialState& s) const {
    std::vector<double> scratch;
    return compute_fluxes(s, scratch);
}

RadialState RadialSolver::step(const RadialState& s, double dt) const {
    if (!(dt >= 0.0)) throw StepRejected("negative time step", 0.0);
    std::vector<double> flux;
    const double admissible = options_.cfl * compute_fluxes(s, flux);
    if (dt > admissible) {
        throw StepRejected("time step " + std::to_string(dt) + " exceeds admissible " +
                               std::to_string(admissible),
                           admissible);
    }
    RadialState out = s;
    apply(out, flux, dt);
    return out;
}

double RadialSolver::advance(RadialState& s, double dt_max) {
    const double admissible = options_.cfl * compute_fluxes(s, flux_);
    const double dt = std::min(admissible, dt_max);
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        if (std::isinf(admissible) && dt_max > 0.0) {
            // Nothing moves (e.g. the zero state); take the whole interval.
            s.t += dt_max;
            return dt_max;
        }
        throw StepRejected("no admissible positive time step", admissible);
    }
    apply(s, flux_, dt);
    return dt;
}

RadialState step(const ModelKind& model, const RadialState& s, double dt) {
    return RadialSolver(model).step(s, dt);
}

// --- driver ------------------------------------------------------------------

RunResult run(RadialSolver& solver, RadialState state, double t_end, const RunOptions& opt) {
    if (t_end < state.t) throw ConfigError("run: t_end precedes the current time");
    const double threshold =
        opt.support_threshold >= 0.0 ? opt.support_threshold : 1e-8 * max_value(state);

    RunResult res;
    auto record = [&](const RadialState& s) {
        TraceRow row;
        row.t = s.t;
        row.mass = mass(s);
        row.support_radius = support_radius(s, threshold);
        row.u_at_x0 = opt.x0_cell >= 0 ? s.values[static_cast<std::size_t>(opt.x0_cell)] : 0.0;
        res.trace.push_back(row);
    };

    std::vector<double> pending = opt.snapshot_times;
    std::sort(pending.begin(), pending.end());
    pending.erase(std::unique(pending.begin(), pending.end()), pending.end());
    std::size_t next_snap = 0;
    while (next_snap < pending.size() && pending[next_snap] < state.t) ++next_snap;

    record(state);
    if (opt.on_snapshot) opt.on_snapshot(state);
    double last_snap_t = state.t;

    const bool track = opt.support_speed_bound > 0.0;
    const double r_start = track ? support_radius(state, threshold) : 0.0;
    const double t_start = state.t;
    const double slack = 2.0 * state.grid->h();

    std::size_t since_trace = 0;
    while (state.t < t_end) {
        double target = t_end;
        if (next_snap < pending.size()) target = std::min(target, pending[next_snap]);
        const double remaining = target - state.t;
        const double dt = solver.advance(state, remaining);
        if (dt >= remaining) state.t = target;  // land exactly on the target time
        ++res.steps;
        ++since_trace;
        if (track) {
            const double grown = support_radius(state, threshold) - r_start;
            res.max_support_excess = std::max(
                res.max_support_excess, grown - opt.support_speed_bound * (state.t - t_start) - slack);
        }

        bool snapped = false;
        while (next_snap < pending.size() && state.t >= pending[next_snap]) {
            res.snapshots.push_back(state);
            if (opt.on_snapshot) opt.on_snapshot(state);
            last_snap_t = state.t;
            ++next_snap;
            snapped = true;
        }
        const bool stop = (opt.stop_when && opt.stop_when(state)) ||
                          (opt.max_steps > 0 && res.steps >= opt.max_steps);
        if (snapped || (opt.trace_every > 0 && since_trace >= opt.trace_every)) {
            if (state.t < t_end && !stop) {
                record(state);
                since_trace = 0;
            }
        }
        if (stop) {
            res.stopped = true;
            break;
        }
    }
    if (res.trace.back().t != state.t) record(state);
    if (opt.on_snapshot && last_snap_t != state.t) opt.on_snapshot(state);
    res.state = std::move(state);
    return res;
}

double default_waiting_threshold(const ModelKind& model) {
    return model.kind == Equation::SpeedLimitedPM ? 1e-4 : 1e-2;
}

WaitingTimeReport measure_waiting_time(const ModelKind& model, const Datum& datum,
                                       const GridPtr& grid, const WaitingTimeSetup& setup) {
    const double threshold_rel = setup.threshold_rel.value_or(default_waiting_threshold(model));
    if (!(setup.t_max > 0.0)) throw ConfigError("waiting time: t_max must be positive");
    if (!(threshold_rel > 0.0)) throw ConfigError("waiting time: threshold must be positive");
    RadialState s0 = init_state(grid, datum);
    const double x0 = datum.support + setup.x0_offset;
    if (x0 >= grid->r_max()) throw ConfigError("waiting time: observation point outside the grid");

    WaitingTimeReport rep;
    rep.x0 = x0;
    rep.x0_cell = grid->cell_of(x0);
    const double umax = max_value(s0);
    rep.threshold = threshold_rel * umax;
    rep.L_used = setup.L;
    const auto upper = upper_bound_T_u(setup.L, grid->dimension(), model);
    rep.T_upper = upper.T_u;
    rep.W = upper.W;
    if (setup.C) rep.T_lower = lower_bound_T_ell(setup.L, *setup.C, model);

    const auto cell = static_cast<std::size_t>(rep.x0_cell);
    if (s0.values[cell] > rep.threshold) {
        throw ConfigError("waiting time: datum already covers the observation point");
    }
    if (umax <= 0.0) {
        rep.t_star_measured = setup.t_max;
        rep.reached = false;
        return rep;
    }

    RadialSolver solver(model, setup.scheme);
    RunOptions opt;
    opt.x0_cell = rep.x0_cell;
    opt.support_threshold = 1e-8 * umax;
    if (model.kind == Equation::SpeedLimitedPM) opt.support_speed_bound = 1.0;
    opt.stop_when = [&](const RadialState& s) { return s.values[cell] > rep.threshold; };
    RunResult res = run(solver, std::move(s0), setup.t_max, opt);
    rep.steps = res.steps;
    rep.reached = res.state.values[cell] > rep.threshold;
    rep.t_star_measured = rep.reached ? res.state.t : setup.t_max;
    rep.max_support_excess = res.max_support_excess;
    return rep;
}

}  // namespace satwait
