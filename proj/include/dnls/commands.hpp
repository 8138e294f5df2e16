#pragma once

// File-producing front ends for the command line: each runs the configured
// cases and writes the tables the config asks for into config.output_dir.

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "dnls/config.hpp"

namespace dnls {

/// Receives one human-readable line per written file or summary item.
using LineSink = std::function<void(std::string_view)>;

/// trajectory.tsv, observers.tsv, fields.tsv, evolve_summary.tsv per epsilon.
void command_evolve(const RunConfig& config, const LineSink& log = {});

/// mprofile.tsv, classification.tsv, mprofile_summary.tsv per epsilon.
void command_mprofile(const RunConfig& config, const LineSink& log = {});

/// sweep.tsv and, with at least four epsilons, orderfit.tsv.
void command_sweep(const RunConfig& config, unsigned max_workers = 0, const LineSink& log = {});

/// scenario_<name>.tsv (per-snapshot history) and scenario_<name>_summary.tsv.
void command_scenario(Scenario scenario, const std::string& output_dir, const LineSink& log = {});

/// File name for `stem` in the config's output directory; multi-epsilon runs get an `_eps<value>` suffix.
std::string output_path(const RunConfig& config, std::string_view stem, double epsilon);

}  // namespace dnls
