#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "satwait/model.hpp"

namespace satwait {

/// Uniform radial grid on [0, r_max]. Cell i spans [i h, (i+1) h]; volumes carry
/// the (N-1)-sphere area factor, which is set to 1 for N = 1 (half-line).
class RadialGrid {
public:
    RadialGrid(int dimension, double r_max, int cells);

    int dimension() const noexcept { return dimension_; }
    double r_max() const noexcept { return r_max_; }
    int cells() const noexcept { return cells_; }
    double h() const noexcept { return h_; }

    double edge(int i) const noexcept { return i * h_; }
    double midpoint(int i) const noexcept { return (i + 0.5) * h_; }
    double volume(int i) const { return volume_[static_cast<std::size_t>(i)]; }
    /// Area of the sphere r = edge(i); face 0 is the origin.
    double face_area(int i) const { return area_[static_cast<std::size_t>(i)]; }
    double total_volume() const;

    /// Index of the cell containing r (cells are closed on the left).
    int cell_of(double r) const;

    static double sphere_area_constant(int dimension);

private:
    int dimension_;
    double r_max_;
    int cells_;
    double h_;
    std::vector<double> volume_;
    std::vector<double> area_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

GridPtr make_grid(int dimension, double r_max, int cells);

struct RadialState {
    GridPtr grid;
    double t = 0.0;
    std::vector<double> values;  // cell averages
};

double mass(const RadialState& s);
double max_value(const RadialState& s);

/// Outer edge of the outermost cell whose value exceeds threshold; 0 if none.
double support_radius(const RadialState& s, double threshold);

/// Radial initial datum: a nonnegative profile of r supported in [0, support].
struct Datum {
    std::function<double(double)> profile;
    double support = 0.0;
    std::string description;
};

Datum zero_datum();
Datum indicator_datum(double height, double radius);
/// height (1 - (r/radius)^2)_+^power
Datum bump_datum(double height, double radius, double power);
/// L min(edge - r, cap)_+^power: grows like L dist^power away from r = edge.
Datum power_law_datum(double L, double edge, double cap, double power);

/// Midpoint-rule cell averages. Throws ConfigError if the datum support
/// exceeds r_max or the datum is negative or non-finite somewhere.
RadialState init_state(const GridPtr& grid, const Datum& datum);

enum class NumericalFlux {
    /// Physical flux evaluated at the larger neighbour value with the two-point
    /// gradient. Monotone without added dissipation because |a(z, g)| is
    /// nondecreasing in z for both models.
    MaxState,
    /// Averaged-state flux plus a local Lax-Friedrichs term
    /// lambda (u_{i+1} - u_i), lambda = max(front_speed_bound, flux_z_lipschitz / 2).
    Rusanov,
};

struct SchemeOptions {
    NumericalFlux flux = NumericalFlux::MaxState;
    double cfl = 0.4;  // fraction of the monotonicity bound
};

/// Explicit finite-volume stepper for u_t = r^{1-N} (r^{N-1} a(u, u_r))_r with
/// zero flux at r = 0 and r = r_max.
class RadialSolver {
public:
    explicit RadialSolver(ModelKind model, SchemeOptions options = {});

    const ModelKind& model() const noexcept { return model_; }
    const SchemeOptions& options() const noexcept { return options_; }

    /// Largest dt for which the update is monotone, conservative and bounded
    /// (before the cfl factor).
    double stability_bound(const RadialState& s) const;
    double admissible_dt(const RadialState& s) const { return options_.cfl * stability_bound(s); }

    /// Throws StepRejected if dt exceeds admissible_dt(s).
    RadialState step(const RadialState& s, double dt) const;

    /// Advances s in place and returns the dt taken, at most dt_max.
    double advance(RadialState& s, double dt_max);

private:
    double compute_fluxes(const RadialState& s, std::vector<double>& flux) const;
    void apply(RadialState& s, const std::vector<double>& flux, double dt) const;

    ModelKind model_;
    SchemeOptions options_;
    std::vector<double> flux_;
};

/// Convenience wrapper for a single step with default scheme options.
RadialState step(const ModelKind& model, const RadialState& s, double dt);

struct TraceRow {
    double t = 0.0;
    double mass = 0.0;
    double support_radius = 0.0;
    double u_at_x0 = 0.0;
};

struct RunOptions {
    std::size_t trace_every = 0;          // steps between trace rows; 0 = start and end only
    std::vector<double> snapshot_times;   // steps land exactly on these
    int x0_cell = -1;                     // cell reported as u_at_x0 (-1: none)
    double support_threshold = -1.0;      // absolute; < 0 means 1e-8 x initial max
    std::size_t max_steps = 0;            // 0 = unlimited
    /// When > 0, every step checks R(t) - R(t0) <= speed (t - t0) + 2h with R the
    /// support radius at support_threshold; the worst excess is reported.
    double support_speed_bound = -1.0;
    /// Called after every step; returning true ends the run.
    std::function<bool(const RadialState&)> stop_when;
    /// Called at t0, at every snapshot time and at the end.
    std::function<void(const RadialState&)> on_snapshot;
};

struct RunResult {
    RadialState state;
    std::vector<TraceRow> trace;
    std::vector<RadialState> snapshots;  // at snapshot_times
    std::size_t steps = 0;
    bool stopped = false;  // stop_when fired or max_steps reached
    /// max over steps of R(t) - R(t0) - speed (t - t0) - 2h; <= 0 means the bound held.
    double max_support_excess = -std::numeric_limits<double>::infinity();
};

RunResult run(RadialSolver& solver, RadialState state, double t_end, const RunOptions& opt = {});

struct WaitingTimeReport {
    double t_star_measured = 0.0;
    double threshold = 0.0;  // absolute
    int x0_cell = 0;
    double x0 = 0.0;
    std::optional<double> T_lower;
    double T_upper = 0.0;
    double W = 0.0;
    double L_used = 0.0;
    bool reached = false;  // false: t_max hit, t* is only a lower estimate
    std::size_t steps = 0;
    double max_support_excess = 0.0;  // see RunResult; tracked for the speed-limited model only
};

struct WaitingTimeSetup {
    double x0_offset = 0.0;        // observation point = datum.support + x0_offset
    /// Relative to the datum maximum; unset means default_waiting_threshold(model).
    std::optional<double> threshold_rel;
    double t_max = 1.0;
    double L = 1.0;                // growth coefficient used for the analytic bounds
    std::optional<double> C;       // lower-bound constant, if known
    SchemeOptions scheme;
};

/// Arrival threshold, relative to the datum maximum, used when none is configured.
/// The speed-limited front is sharp, so a low threshold resolves it; the
/// relativistic front has a thin diffusive foot that a low threshold over-resolves.
double default_waiting_threshold(const ModelKind& model);

WaitingTimeReport measure_waiting_time(const ModelKind& model, const Datum& datum,
                                       const GridPtr& grid, const WaitingTimeSetup& setup);

}  // namespace satwait
