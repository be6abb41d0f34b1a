#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "satwait/io.hpp"
#include "satwait/model.hpp"
#include "satwait/solver.hpp"

namespace satwait::cli {

enum ExitCode : int {
    kSuccess = 0,
    kConfigError = 2,
    kSolverFailure = 3,
    kCertificationFailure = 4,
};

struct DatumSpec {
    std::string type = "power_law";  // power_law | indicator | bump | zero
    double L = 1.0;
    double edge = 1.0;
    std::optional<double> cap;    // power_law; defaults to edge / 2
    std::optional<double> power;  // power_law: critical exponent; bump: 1
    double height = 1.0;
    double radius = 1.0;
};

/// Builds the datum; `L_override` replaces the power-law coefficient.
Datum make_datum(const DatumSpec& spec, const ModelKind& model, std::optional<double> L_override = {});

/// One experiment: sections model, grid, datum, run, output (see docs/config.md).
struct ExperimentConfig {
    ModelKind model = ModelKind::make(Equation::SpeedLimitedPM, 2.0, 1);
    double r_max = 2.0;
    int cells = 1024;
    DatumSpec datum;

    // run
    double t_end = 1.0;
    std::size_t trace_every = 100;
    std::vector<double> snapshot_times;
    std::optional<double> x0;  // traced point for simulate
    std::size_t max_steps = 0;
    SchemeOptions scheme;
    std::vector<double> L_list;
    double t_max = 20.0;
    std::optional<double> threshold_rel;
    double x0_offset = 0.0;
    std::optional<double> C;
    double upper_allowance = 0.1;
    std::uint64_t seed = 42;

    // output
    std::filesystem::path out_dir = "out";
};

/// Validates and fills an ExperimentConfig. Throws ConfigError.
ExperimentConfig parse_config(const io::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Runs the command line; returns the process exit code. Never throws.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);  // args[0] is the program name

}  // namespace satwait::cli
