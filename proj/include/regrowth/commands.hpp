#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "regrowth/config.hpp"
#include "regrowth/error.hpp"

namespace regrowth {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitAssumption = 2, kExitNumeric = 3 };

struct CommandOptions {
    std::filesystem::path out_dir;
    bool force = false;
};

/// Prints the assumption constants and writes assumptions.csv.
/// Returns kExitAssumption when any condition fails.
int cmd_check(const RunConfig& config, const CommandOptions& options, std::ostream& log);

/// value.csv, policy.csv and report.csv, plus baseline_*.csv for the
/// single-regime baseline and the SVG plots when output.formats has svg.
int cmd_solve(const RunConfig& config, const CommandOptions& options, std::ostream& log);

/// residuals.csv. Reuses value.csv / policy.csv from the output directory
/// when they were produced by the same model and numerics, else solves.
int cmd_euler(const RunConfig& config, const CommandOptions& options, std::ostream& log);

/// histogram.csv, regimes.csv, drift.csv and optionally path.csv.
int cmd_simulate(const RunConfig& config, const CommandOptions& options, std::ostream& log);

/// value_function.svg and investment_ratio.svg from existing solve outputs.
/// Throws Error{MissingArtifact} when they are absent.
int cmd_plot(const RunConfig& config, const CommandOptions& options, std::ostream& log);

int exit_code_for(ErrorCode code);

/// Solution stored as `<prefix>value.csv` / `<prefix>policy.csv` in
/// `directory`, if present and matching the config's model, numerics and grid.
std::optional<Solution> load_solution(const std::filesystem::path& directory, const RunConfig& config,
                                      const ModelSpec& spec, const std::string& prefix = "");

}  // namespace regrowth
