// Copyright 2026 The fisherlens authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Command front end: parameter sweeps, figure reproduction, least-separation
 * tables, the oracle cross-check and the Cramer-Rao experiment, with CSV
 * (and optional SVG) output. Exit codes: 0 success, 2 bad arguments,
 * 3 numeric non-convergence, 4 check failure.
 */

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fisherlens::cli {

/// A verification command found a violated tolerance (exit code 4).
struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;       // sweep | reproduce | sleast | oracle-check | crb
    std::string figure;        // fig2a | fig2b | fig3a | fig3b | all
    double sigma = 1.0;
    double r = 1.0;
    double alpha = 0.5235987755982988; // pi/6
    double phi = 0.0;
    double s_min = 0.0;
    double s_max = 5.0;
    int points = 501;
    std::uint64_t seed = 12345;
    int m = 1000;       // crb: outcomes per trial
    int trials = 500;   // crb: trials
    double s_true = 1.0;
    int grid_n = 4001;  // oracle grid size (negative-control hook)
    std::string out;    // output file (sweep/sleast/crb) or directory (reproduce)
    bool with_oracle = false;
    bool emit_svg = false;
    bool alpha_explicit = false; // --alpha given (sleast: single row vs preset grid)
};

/// Angle expressions: radians, or products/quotients of numbers and "pi"
/// ("pi/6", "3*pi/4", "0.5"). Throws std::invalid_argument on anything else.
double parse_angle_expr(const std::string& text);

/// Plain-text config file "key = value" (one pair per line, '#' comments);
/// unknown keys are an error. Returns the raw pairs.
std::map<std::string, std::string> load_config_file(const std::string& path);

/// Apply a raw pair to the config; throws std::invalid_argument on unknown
/// keys or unparsable values.
void apply_config_pair(RunConfig& cfg, const std::string& key,
                       const std::string& value);

/// Canonical "key=value;..." serialization used in the CSV provenance line.
std::string canonical_config(const RunConfig& cfg);

struct SweepRow {
    double s;
    double f_tot;
    double f_unentangled;
    std::optional<double> f_oracle; // populated with --with-oracle
};

/// Ordered sweep samples plus the configuration that produced them.
struct SweepResult {
    RunConfig config;
    std::vector<SweepRow> rows;
};

SweepResult compute_sweep(const RunConfig& cfg);

int run_sweep(const RunConfig& cfg);
int run_reproduce(const RunConfig& cfg);
int run_sleast(const RunConfig& cfg);
int run_oracle_check(const RunConfig& cfg);
int run_crb(const RunConfig& cfg);

/// Dispatch on cfg.command.
int run(const RunConfig& cfg);

} // namespace fisherlens::cli
