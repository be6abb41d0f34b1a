#include "satwait/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "satwait/errors.hpp"

namespace satwait::io {

namespace {

json real_or_null(double x) {
    if (!std::isfinite(x)) return nullptr;
    return x;
}

const json& field(const json& j, const char* key) {
    if (!j.is_object()) throw ConfigError("params: expected a JSON object");
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(std::string("params: missing field '") + key + "'");
    return *it;
}

double real_field(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_number()) throw ConfigError(std::string("params: field '") + key + "' must be a number");
    return v.get<double>();
}

int int_field(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_number_integer()) throw ConfigError(std::string("params: field '") + key + "' must be an integer");
    return v.get<int>();
}

std::vector<double> vector_field(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_array()) throw ConfigError(std::string("params: field '") + key + "' must be an array");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) throw ConfigError(std::string("params: field '") + key + "' must hold numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

}  // namespace

std::string format_real(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json to_json(const MSubParams& p) {
    return json{{"M", p.M}, {"N", p.N}, {"b", p.b}, {"ell", p.ell}, {"K", p.K},
                {"w", p.w}, {"s", p.s}, {"center", p.center}, {"lifetime", p.lifetime}};
}

json to_json(const RelSubParams& p) {
    return json{{"m", p.m}, {"N", p.N}, {"gamma", p.gamma}, {"r0", p.r0}, {"U", p.U},
                {"center", p.center}, {"horizon", p.horizon}, {"r1", p.r1}, {"gamma0", p.gamma0}};
}

MSubParams m_params_from_json(const json& j) {
    // lifetime is derived, so it is not read back
    MSubParams p;
    try {
        p = MSubParams::make(real_field(j, "M"), int_field(j, "N"), real_field(j, "b"),
                             real_field(j, "ell"), real_field(j, "K"), real_field(j, "w"),
                             real_field(j, "s"), vector_field(j, "center"));
    } catch (const DomainError& e) {
        throw ConfigError(std::string("params: ") + e.what());
    }
    return p;
}

RelSubParams rel_params_from_json(const json& j) {
    RelSubParams p;
    p.m = real_field(j, "m");
    p.N = int_field(j, "N");
    p.gamma = real_field(j, "gamma");
    p.r0 = real_field(j, "r0");
    p.U = real_field(j, "U");
    p.center = vector_field(j, "center");
    p.horizon = real_field(j, "horizon");
    p.r1 = real_field(j, "r1");
    p.gamma0 = real_field(j, "gamma0");
    if (!(p.m > 1.0) || p.N < 1 || !(p.gamma > 0.0) || !(p.r0 > 0.0) || !(p.U > 0.0) || !(p.horizon > 0.0)) {
        throw ConfigError("params: rel-family values out of range");
    }
    if (p.center.size() != static_cast<std::size_t>(p.N)) throw ConfigError("params: center must have N entries");
    return p;
}

json to_json(const CertificationReport& r) {
    return json{{"family", r.family},
                {"n_samples", r.n_samples},
                {"max_residual", real_or_null(r.max_residual)},
                {"min_slack", real_or_null(r.min_slack)},
                {"max_rh_defect", real_or_null(r.max_rh_defect)},
                {"worst_point", {{"t", r.worst_t}, {"y", r.worst_y}}},
                {"pass", r.pass}};
}

json to_json(const WaitingTimeReport& r) {
    return json{{"t_star_measured", r.t_star_measured},
                {"reached", r.reached},
                {"threshold", r.threshold},
                {"x0", r.x0},
                {"x0_cell", r.x0_cell},
                {"L_used", r.L_used},
                {"T_lower", r.T_lower ? json(*r.T_lower) : json(nullptr)},
                {"T_upper", real_or_null(r.T_upper)},
                {"W", real_or_null(r.W)},
                {"steps", r.steps},
                {"max_support_excess", real_or_null(r.max_support_excess)}};
}

json to_json(const ComparisonReport& r) {
    return json{{"min_gap", real_or_null(r.min_gap)},
                {"min_gap_on_support", real_or_null(r.min_gap_on_support)},
                {"min_gap_at_start", real_or_null(r.min_gap_at_start)},
                {"at_t", r.at_t},
                {"at_r", r.at_r},
                {"umax", r.umax},
                {"t_end", r.t_end},
                {"steps", r.steps},
                {"max_support_excess", real_or_null(r.max_support_excess)}};
}

json to_json(const UpperBound& b) { return json{{"T_upper", real_or_null(b.T_u)}, {"W", real_or_null(b.W)}}; }

json scaling_summary(const ScalingStudy& s) {
    return json{{"slope", real_or_null(s.slope)},
                {"intercept", real_or_null(s.intercept)},
                {"residual", real_or_null(s.residual)},
                {"conclusive", s.conclusive},
                {"all_below_upper", s.all_below_upper}};
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void write_json(const std::filesystem::path& path, const json& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

void write_snapshot_csv(const std::filesystem::path& path, const RadialState& s) {
    auto out = open_out(path);
    out << "r,u\n";
    for (int i = 0; i < s.grid->cells(); ++i) {
        out << format_real(s.grid->midpoint(i)) << ',' << format_real(s.values[static_cast<std::size_t>(i)])
            << '\n';
    }
}

void write_trace_csv(const std::filesystem::path& path, std::span<const TraceRow> trace) {
    auto out = open_out(path);
    out << "t,mass,support_radius,u_at_x0\n";
    for (const auto& row : trace) {
        out << format_real(row.t) << ',' << format_real(row.mass) << ',' << format_real(row.support_radius)
            << ',' << format_real(row.u_at_x0) << '\n';
    }
}

void write_scaling_csv(const std::filesystem::path& path, const ScalingStudy& s) {
    auto out = open_out(path);
    out << "L,t_star,T_upper,conclusive\n";
    for (const auto& p : s.points) {
        out << format_real(p.L) << ',' << format_real(p.report.t_star_measured) << ','
            << format_real(p.report.T_upper) << ',' << (p.conclusive ? 1 : 0) << '\n';
    }
}

}  // namespace satwait::io
