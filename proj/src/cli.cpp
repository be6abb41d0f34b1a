#include "satwait/cli.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <set>
#include <variant>

#include <CLI11.hpp>

#include "satwait/bounds.hpp"
#include "satwait/errors.hpp"
#include "satwait/subsolutions.hpp"
#include "satwait/verify.hpp"

namespace satwait::cli {

using io::json;

namespace {

// --- config reading helpers -----------------------------------------------------

void reject_unknown(const json& section, const char* name, std::initializer_list<const char*> allowed) {
    if (!section.is_object()) throw ConfigError(std::string("config: section '") + name + "' must be an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : section.items()) {
        if (!ok.count(key)) throw ConfigError(std::string("config: unknown key '") + key + "' in '" + name + "'");
    }
}

template <class T>
std::optional<T> opt_value(const json& section, const char* key) {
    auto it = section.find(key);
    if (it == section.end() || it->is_null()) return std::nullopt;
    try {
        if constexpr (std::is_floating_point_v<T>) {
            if (!it->is_number()) throw ConfigError("");
        } else if constexpr (std::is_integral_v<T>) {
            if (!it->is_number_integer()) throw ConfigError("");
        }
        return it->get<T>();
    } catch (const std::exception&) {
        throw ConfigError(std::string("config: key '") + key + "' has the wrong type");
    }
}

std::vector<double> real_list(const json& section, const char* key) {
    auto it = section.find(key);
    if (it == section.end()) return {};
    if (!it->is_array()) throw ConfigError(std::string("config: key '") + key + "' must be an array");
    std::vector<double> out;
    for (const auto& v : *it) {
        if (!v.is_number()) throw ConfigError(std::string("config: key '") + key + "' must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

const json& section(const json& j, const char* name, bool required) {
    static const json empty = json::object();
    auto it = j.find(name);
    if (it == j.end()) {
        if (required) throw ConfigError(std::string("config: missing section '") + name + "'");
        return empty;
    }
    return *it;
}

// --- family inputs shared by verify and subsolution ------------------------------

using FamilyParams = std::variant<MSubParams, RelSubParams>;

struct FamilyInput {
    std::string family;
    bool synthesize = false;
    double L = 1.0, R = 1.0, exponent = 2.0;
    int N = 1;
    std::string params_path;
};

void add_family_options(CLI::App* cmd, FamilyInput& in) {
    cmd->add_option("--family", in.family, "subsolution family: m (speed-limited) or rel (relativistic)")
        ->required()
        ->check(CLI::IsMember({"m", "rel"}));
    auto* a = cmd->add_flag("--auto", in.synthesize, "synthesize parameters from --L --R --N --exponent");
    auto* p = cmd->add_option("--params", in.params_path, "parameter JSON file");
    a->excludes(p);
    cmd->add_option("--L", in.L, "growth coefficient");
    cmd->add_option("--R", in.R, "interior ball radius");
    cmd->add_option("--N", in.N, "space dimension");
    cmd->add_option("--exponent", in.exponent, "M for family m, m for family rel");
}

FamilyParams load_family(const FamilyInput& in) {
    if (!in.synthesize && in.params_path.empty()) throw ConfigError("either --auto or --params is required");
    if (in.synthesize) {
        try {
            if (in.family == "m") return synthesize_m_params(in.L, in.R, in.N, in.exponent).params;
            return synthesize_rel_params(in.L, in.R, in.N, in.exponent).params;
        } catch (const DomainError& e) {
            throw ConfigError(e.what());
        }
    }
    json j = io::read_json(in.params_path);
    if (j.is_object() && j.contains("params")) j = j["params"];
    if (in.family == "m") return io::m_params_from_json(j);
    return io::rel_params_from_json(j);
}

json params_json(const FamilyParams& p) {
    return std::visit([](const auto& v) { return io::to_json(v); }, p);
}

// --- subcommands -----------------------------------------------------------------

struct Globals {
    std::string out;
    int jobs = 1;
    std::optional<std::uint64_t> seed;
};

std::filesystem::path out_dir(const Globals& g, const std::filesystem::path& configured) {
    return g.out.empty() ? configured : std::filesystem::path(g.out);
}

int cmd_simulate(const std::string& config_path, const Globals& g) {
    ExperimentConfig cfg = load_config(config_path);
    const auto dir = out_dir(g, cfg.out_dir);
    auto grid = make_grid(cfg.model.dimension, cfg.r_max, cfg.cells);
    RadialState s0 = init_state(grid, make_datum(cfg.datum, cfg.model));
    if (cfg.x0 && !(*cfg.x0 >= 0.0 && *cfg.x0 < cfg.r_max)) throw ConfigError("config: run.x0 outside the grid");
    const double m0 = mass(s0);

    RadialSolver solver(cfg.model, cfg.scheme);
    RunOptions opt;
    opt.trace_every = cfg.trace_every;
    opt.snapshot_times = cfg.snapshot_times;
    opt.max_steps = cfg.max_steps;
    if (cfg.x0) opt.x0_cell = grid->cell_of(*cfg.x0);
    if (cfg.model.kind == Equation::SpeedLimitedPM) opt.support_speed_bound = 1.0;
    int snap = 0;
    opt.on_snapshot = [&](const RadialState& s) {
        char name[32];
        std::snprintf(name, sizeof name, "snapshot_%04d.csv", snap++);
        io::write_snapshot_csv(dir / "snapshots" / name, s);
    };
    RunResult res = run(solver, std::move(s0), cfg.t_end, opt);
    for (double v : res.state.values) {
        if (!std::isfinite(v) || v < 0.0) throw std::runtime_error("solver produced an invalid state");
    }
    io::write_trace_csv(dir / "trace.csv", res.trace);
    const double m1 = mass(res.state);
    json summary{{"equation", std::string(to_string(cfg.model.kind))},
                 {"exponent", cfg.model.exponent},
                 {"dimension", cfg.model.dimension},
                 {"t_end", res.state.t},
                 {"steps", res.steps},
                 {"snapshots", snap},
                 {"mass_initial", m0},
                 {"mass_final", m1},
                 {"relative_mass_drift", m0 > 0.0 ? std::abs(m1 - m0) / m0 : 0.0},
                 {"max_value", max_value(res.state)},
                 {"max_support_excess",
                  std::isfinite(res.max_support_excess) ? json(res.max_support_excess) : json(nullptr)}};
    io::write_json(dir / "simulate.json", summary);
    std::cout << "simulate: t=" << res.state.t << " steps=" << res.steps << " -> " << dir.string() << '\n';
    return kSuccess;
}

int cmd_verify(const FamilyInput& in, const Globals& g) {
    const FamilyParams params = load_family(in);
    CertificationOptions opt;
    if (g.seed) opt.seed = *g.seed;
    const CertificationReport rep = std::visit(
        [&](const auto& p) {
            if constexpr (std::is_same_v<std::decay_t<decltype(p)>, MSubParams>) return certify_M(p, opt);
            else return certify_rel(p, opt);
        },
        params);
    json j = io::to_json(rep);
    j["params"] = params_json(params);
    const auto dir = out_dir(g, "out");
    io::write_json(dir / "certification.json", j);
    std::cout << "verify: family=" << rep.family << " max_residual=" << rep.max_residual
              << " min_slack=" << rep.min_slack << (rep.pass ? " PASS" : " FAIL") << '\n';
    return rep.pass ? kSuccess : kCertificationFailure;
}

int cmd_waiting_time(const std::string& config_path, const Globals& g) {
    ExperimentConfig cfg = load_config(config_path);
    if (cfg.L_list.empty()) throw ConfigError("config: run.L_list must not be empty");
    if (cfg.datum.type != "power_law") throw ConfigError("config: waiting-time needs a power_law datum");
    const auto dir = out_dir(g, cfg.out_dir);
    auto grid = make_grid(cfg.model.dimension, cfg.r_max, cfg.cells);

    WaitingTimeSetup setup;
    setup.x0_offset = cfg.x0_offset;
    setup.threshold_rel = cfg.threshold_rel;
    setup.t_max = cfg.t_max;
    setup.C = cfg.C;
    setup.scheme = cfg.scheme;
    const auto datum_for = [&](double L) { return make_datum(cfg.datum, cfg.model, L); };
    ScalingStudy study;
    if (cfg.L_list.size() >= 3) {
        study = scaling_study(cfg.model, cfg.L_list, datum_for, grid, setup, std::max(1, g.jobs),
                              cfg.upper_allowance);
    } else {
        // too few points for a fit: report the individual runs only
        study.slope = study.intercept = study.residual = std::nan("");
        for (double L : cfg.L_list) {
            WaitingTimeSetup s = setup;
            s.L = L;
            ScalingPoint p{L, measure_waiting_time(cfg.model, datum_for(L), grid, s), false};
            p.conclusive = p.report.reached;
            study.conclusive = study.conclusive && p.conclusive;
            study.all_below_upper = study.all_below_upper &&
                                    p.report.t_star_measured <= (1.0 + cfg.upper_allowance) * p.report.T_upper;
            study.points.push_back(p);
        }
    }

    for (std::size_t i = 0; i < study.points.size(); ++i) {
        const auto& p = study.points[i];
        json j = io::to_json(p.report);
        j["L"] = p.L;
        j["conclusive"] = p.conclusive;
        char name[40];
        std::snprintf(name, sizeof name, "waiting_time_%03zu.json", i);
        io::write_json(dir / name, j);
        std::cout << "waiting-time: L=" << p.L << " t*=" << p.report.t_star_measured
                  << " T_upper=" << p.report.T_upper << (p.conclusive ? "" : " (inconclusive)") << '\n';
    }
    io::write_scaling_csv(dir / "scaling.csv", study);
    io::write_json(dir / "scaling_summary.json", io::scaling_summary(study));
    if (std::isfinite(study.slope)) std::cout << "waiting-time: slope=" << study.slope << '\n';
    return kSuccess;
}

struct BoundsInput {
    std::string equation = "rel_pm";
    double exponent = 2.0;
    int N = 1;
    double L = 1.0;
    std::optional<double> C;
};

int cmd_bounds(const BoundsInput& in, const Globals& g) {
    ModelKind model;
    try {
        model = ModelKind::make(equation_from_string(in.equation), in.exponent, in.N);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    const UpperBound up = upper_bound_T_u(in.L, in.N, model);
    json j{{"equation", std::string(to_string(model.kind))},
           {"exponent", model.exponent},
           {"dimension", model.dimension},
           {"L", in.L},
           {"critical_growth_exponent", critical_growth_exponent(model)}};
    j.update(io::to_json(up));
    j["T_lower"] = in.C ? json(lower_bound_T_ell(in.L, in.C, model)) : json(nullptr);
    io::write_json(out_dir(g, "out") / "bounds.json", j);
    std::cout << "bounds: T_upper=" << up.T_u << " W=" << up.W << '\n';
    return kSuccess;
}

struct ProfileInput {
    double t = 0.0;
    int points = 201;
    std::optional<double> r_max;
};

int cmd_subsolution(const FamilyInput& in, const ProfileInput& prof, const Globals& g) {
    const FamilyParams params = load_family(in);
    if (prof.points < 2) throw ConfigError("--points must be at least 2");
    if (!(prof.t >= 0.0)) throw ConfigError("--t must be nonnegative");
    std::function<double(double)> profile;
    double support = 0.0;
    if (const auto* p = std::get_if<MSubParams>(&params)) {
        if (prof.t >= p->lifetime) throw ConfigError("--t must be below the lifetime");
        support = p->s + p->w * prof.t;
        profile = [p, &prof](double r) { return eval_m_sub_radial(prof.t, r, *p); };
    } else {
        const auto* q = std::get_if<RelSubParams>(&params);
        if (prof.t >= rel_time_window(*q)) throw ConfigError("--t must be below the time window");
        support = front_radius_rel(prof.t, *q);
        profile = [q, &prof](double r) { return eval_rel_sub_radial(prof.t, r, *q); };
    }
    const double r_max = prof.r_max.value_or(1.25 * support);
    if (!(r_max > 0.0)) throw ConfigError("--r-max must be positive");

    const auto dir = out_dir(g, "out");
    std::filesystem::create_directories(dir);
    std::ofstream csv(dir / "subsolution.csv");
    if (!csv) throw std::runtime_error("cannot write subsolution.csv");
    csv << "r,u\n";
    for (int k = 0; k < prof.points; ++k) {
        const double r = r_max * k / (prof.points - 1);
        csv << io::format_real(r) << ',' << io::format_real(profile(r)) << '\n';
    }
    io::write_json(dir / "subsolution_params.json",
                   json{{"family", in.family}, {"t", prof.t}, {"params", params_json(params)}});
    std::cout << "subsolution: support radius " << support << " at t=" << prof.t << '\n';
    return kSuccess;
}

}  // namespace

// --- config ------------------------------------------------------------------------

Datum make_datum(const DatumSpec& spec, const ModelKind& model, std::optional<double> L_override) {
    if (spec.type == "power_law") {
        const double L = L_override.value_or(spec.L);
        const double power = spec.power.value_or(critical_growth_exponent(model));
        return power_law_datum(L, spec.edge, spec.cap.value_or(0.5 * spec.edge), power);
    }
    if (spec.type == "indicator") return indicator_datum(spec.height, spec.radius);
    if (spec.type == "bump") return bump_datum(spec.height, spec.radius, spec.power.value_or(1.0));
    if (spec.type == "zero") return zero_datum();
    throw ConfigError("config: unknown datum type '" + spec.type + "'");
}

ExperimentConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    reject_unknown(j, "config", {"model", "grid", "datum", "run", "output", "seed"});
    ExperimentConfig cfg;

    const json& m = section(j, "model", true);
    reject_unknown(m, "model", {"equation", "exponent", "dimension"});
    const auto eq = opt_value<std::string>(m, "equation");
    if (!eq) throw ConfigError("config: model.equation is required");
    const auto exponent = opt_value<double>(m, "exponent");
    if (!exponent) throw ConfigError("config: model.exponent is required");
    try {
        cfg.model = ModelKind::make(equation_from_string(*eq), *exponent,
                                    opt_value<int>(m, "dimension").value_or(1));
    } catch (const DomainError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    const json& gr = section(j, "grid", true);
    reject_unknown(gr, "grid", {"r_max", "cells"});
    cfg.r_max = opt_value<double>(gr, "r_max").value_or(cfg.r_max);
    cfg.cells = opt_value<int>(gr, "cells").value_or(cfg.cells);
    if (!(cfg.r_max > 0.0) || !std::isfinite(cfg.r_max)) throw ConfigError("config: grid.r_max must be positive");
    if (cfg.cells < 8) throw ConfigError("config: grid.cells must be at least 8");

    const json& d = section(j, "datum", true);
    reject_unknown(d, "datum", {"type", "L", "edge", "cap", "power", "height", "radius"});
    cfg.datum.type = opt_value<std::string>(d, "type").value_or(cfg.datum.type);
    cfg.datum.L = opt_value<double>(d, "L").value_or(cfg.datum.L);
    cfg.datum.edge = opt_value<double>(d, "edge").value_or(cfg.datum.edge);
    cfg.datum.cap = opt_value<double>(d, "cap");
    cfg.datum.power = opt_value<double>(d, "power");
    cfg.datum.height = opt_value<double>(d, "height").value_or(cfg.datum.height);
    cfg.datum.radius = opt_value<double>(d, "radius").value_or(cfg.datum.radius);
    try {
        (void)make_datum(cfg.datum, cfg.model);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("config: datum: ") + e.what());
    }

    const json& r = section(j, "run", false);
    reject_unknown(r, "run", {"t_end", "trace_every", "snapshot_times", "x0", "max_steps", "cfl", "flux",
                              "L_list", "t_max", "threshold_rel", "x0_offset", "C", "upper_allowance", "seed"});
    cfg.t_end = opt_value<double>(r, "t_end").value_or(cfg.t_end);
    if (!(cfg.t_end >= 0.0) || !std::isfinite(cfg.t_end)) throw ConfigError("config: run.t_end must be >= 0");
    if (auto v = opt_value<std::int64_t>(r, "trace_every")) {
        if (*v < 0) throw ConfigError("config: run.trace_every must be >= 0");
        cfg.trace_every = static_cast<std::size_t>(*v);
    }
    cfg.snapshot_times = real_list(r, "snapshot_times");
    for (double t : cfg.snapshot_times) {
        if (!(t >= 0.0) || t > cfg.t_end) throw ConfigError("config: snapshot times must lie in [0, t_end]");
    }
    cfg.x0 = opt_value<double>(r, "x0");
    if (auto v = opt_value<std::int64_t>(r, "max_steps")) {
        if (*v < 0) throw ConfigError("config: run.max_steps must be >= 0");
        cfg.max_steps = static_cast<std::size_t>(*v);
    }
    cfg.scheme.cfl = opt_value<double>(r, "cfl").value_or(cfg.scheme.cfl);
    if (!(cfg.scheme.cfl > 0.0 && cfg.scheme.cfl <= 1.0)) throw ConfigError("config: run.cfl must lie in (0, 1]");
    const std::string flux = opt_value<std::string>(r, "flux").value_or("max_state");
    if (flux == "max_state") cfg.scheme.flux = NumericalFlux::MaxState;
    else if (flux == "rusanov") cfg.scheme.flux = NumericalFlux::Rusanov;
    else throw ConfigError("config: run.flux must be max_state or rusanov");
    cfg.L_list = real_list(r, "L_list");
    for (double L : cfg.L_list) {
        if (!(L > 0.0) || !std::isfinite(L)) throw ConfigError("config: run.L_list entries must be positive");
    }
    cfg.t_max = opt_value<double>(r, "t_max").value_or(cfg.t_max);
    if (!(cfg.t_max > 0.0)) throw ConfigError("config: run.t_max must be positive");
    cfg.threshold_rel = opt_value<double>(r, "threshold_rel");
    if (cfg.threshold_rel && !(*cfg.threshold_rel > 0.0 && *cfg.threshold_rel < 1.0)) {
        throw ConfigError("config: run.threshold_rel must lie in (0, 1)");
    }
    cfg.x0_offset = opt_value<double>(r, "x0_offset").value_or(cfg.x0_offset);
    if (!(cfg.x0_offset >= 0.0)) throw ConfigError("config: run.x0_offset must be >= 0");
    cfg.C = opt_value<double>(r, "C");
    if (cfg.C && !(*cfg.C > 0.0)) throw ConfigError("config: run.C must be positive");
    cfg.upper_allowance = opt_value<double>(r, "upper_allowance").value_or(cfg.upper_allowance);
    const auto seed = opt_value<std::int64_t>(r, "seed").value_or(opt_value<std::int64_t>(j, "seed").value_or(42));
    if (seed < 0) throw ConfigError("config: seed must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(seed);

    const json& o = section(j, "output", false);
    reject_unknown(o, "output", {"directory"});
    cfg.out_dir = opt_value<std::string>(o, "directory").value_or("out");
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) { return parse_config(io::read_json(path)); }

// --- entry point ------------------------------------------------------------------

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Waiting times and subsolutions for flux-saturated porous medium equations", "satwait"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    std::uint64_t seed = 42;
    app.add_option("--out", g.out, "output directory (overrides the config)");
    app.add_option("--jobs", g.jobs, "concurrent runs for sweeps")->check(CLI::PositiveNumber);
    auto* seed_opt = app.add_option("--seed", seed, "seed for sampled checks");

    std::string config_path;
    auto* sim = app.add_subcommand("simulate", "run the radial solver from a config");
    sim->add_option("config", config_path, "config JSON")->required();

    FamilyInput verify_in;
    auto* ver = app.add_subcommand("verify", "certify a subsolution parameter set");
    add_family_options(ver, verify_in);

    auto* wt = app.add_subcommand("waiting-time", "measure t* for each L and fit the scaling exponent");
    wt->add_option("config", config_path, "config JSON")->required();

    BoundsInput bounds_in;
    auto* bd = app.add_subcommand("bounds", "closed-form waiting-time bounds");
    bd->add_option("--equation", bounds_in.equation, "rel_pm or slpm");
    bd->add_option("--exponent", bounds_in.exponent, "m or M");
    bd->add_option("--N", bounds_in.N, "space dimension");
    bd->add_option("--L", bounds_in.L, "growth coefficient");
    bd->add_option("--C", bounds_in.C, "lower-bound constant");

    FamilyInput sub_in;
    ProfileInput prof;
    auto* sb = app.add_subcommand("subsolution", "write a subsolution profile as CSV");
    add_family_options(sb, sub_in);
    sb->add_option("--t", prof.t, "time");
    sb->add_option("--points", prof.points, "number of radii");
    sb->add_option("--r-max", prof.r_max, "largest radius (default 1.25 x support)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kSuccess : kConfigError;
    }
    if (seed_opt->count() > 0) g.seed = seed;

    try {
        if (sim->parsed()) return cmd_simulate(config_path, g);
        if (ver->parsed()) return cmd_verify(verify_in, g);
        if (wt->parsed()) return cmd_waiting_time(config_path, g);
        if (bd->parsed()) return cmd_bounds(bounds_in, g);
        if (sb->parsed()) return cmd_subsolution(sub_in, prof, g);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const SynthesisError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kSolverFailure;
    }
    return kConfigError;
}

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace satwait::cli
