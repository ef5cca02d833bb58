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

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "cli.hpp"
#include "fisherlens/estimator.hpp"
#include "fisherlens/numerics.hpp"
#include "fisherlens/oracle.hpp"
#include "fisherlens/version.hpp"

namespace {

using fisherlens::cli::RunConfig;

struct RawArgs {
    std::string alpha, phi;   // angle expressions, parsed after config merge
    std::string config_path;
};

// register the common option set on a subcommand; returns the raw slots
void add_common(CLI::App* sub, RunConfig& cfg, RawArgs& raw) {
    sub->add_option("--sigma", cfg.sigma, "PSF width sigma");
    sub->add_option("--r", cfg.r, "unbalanceness ratio b/a");
    sub->add_option("--alpha", raw.alpha, "analyzer rotation angle (radians or e.g. pi/6)");
    sub->add_option("--phi", raw.phi, "relative phase (radians or e.g. pi/2)");
    sub->add_option("--s-min", cfg.s_min, "sweep lower bound");
    sub->add_option("--s-max", cfg.s_max, "sweep upper bound");
    sub->add_option("--points", cfg.points, "number of sweep points");
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--out", cfg.out, "output path (file, or directory for reproduce)");
    sub->add_flag("--with-oracle", cfg.with_oracle, "add the grid-oracle column");
    sub->add_flag("--svg", cfg.emit_svg, "also write SVG plots");
    sub->add_option("--config", raw.config_path, "key = value config file");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fisherlens: Fisher information of two-source separation "
                 "with an entangled partner"};
    app.set_version_flag("--version", fisherlens::kVersion);
    app.require_subcommand(1);

    RunConfig cfg;
    RawArgs raw;

    CLI::App* sweep = app.add_subcommand("sweep", "sweep F(s) to CSV");
    CLI::App* reproduce = app.add_subcommand("reproduce", "reproduce a figure's curves");
    CLI::App* sleast = app.add_subcommand("sleast", "least resolvable separation table");
    CLI::App* oracle = app.add_subcommand("oracle-check",
                                          "closed forms vs the first-principles oracle");
    CLI::App* crb = app.add_subcommand("crb", "Monte-Carlo Cramer-Rao experiment");

    for (CLI::App* sub : {sweep, reproduce, sleast, oracle, crb})
        add_common(sub, cfg, raw);

    reproduce->add_option("figure", cfg.figure, "fig2a | fig2b | fig3a | fig3b | all")
        ->required();
    crb->add_option("--m", cfg.m, "outcomes per trial");
    crb->add_option("--trials", cfg.trials, "number of trials");
    crb->add_option("--s-true", cfg.s_true, "true separation");
    oracle->add_option("--grid-n", cfg.grid_n, "oracle grid points (negative control)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();

    try {
        // precedence: command line > config file > defaults
        if (!raw.config_path.empty()) {
            for (const auto& [key, value] : fisherlens::cli::load_config_file(raw.config_path)) {
                const std::string flag =
                    key == "s_min" ? "--s-min" :
                    key == "s_max" ? "--s-max" :
                    key == "s_true" ? "--s-true" :
                    key == "with_oracle" ? "--with-oracle" :
                    key == "grid_n" ? "--grid-n" :
                    key == "svg" ? "--svg" :
                    key == "figure" ? "figure" : "--" + key;
                const CLI::Option* opt =
                    sub->get_option_no_throw(flag);
                if (opt && opt->count() > 0) continue; // flag wins
                if (key == "alpha" && !raw.alpha.empty()) continue;
                if (key == "phi" && !raw.phi.empty()) continue;
                fisherlens::cli::apply_config_pair(cfg, key, value);
                if (key == "alpha") cfg.alpha_explicit = true;
            }
        }
        if (!raw.alpha.empty()) {
            cfg.alpha = fisherlens::cli::parse_angle_expr(raw.alpha);
            cfg.alpha_explicit = true;
        }
        if (!raw.phi.empty()) cfg.phi = fisherlens::cli::parse_angle_expr(raw.phi);

        return fisherlens::cli::run(cfg);
    } catch (const fisherlens::cli::CheckFailure& e) {
        std::cerr << "fisherlens: " << e.what() << "\n";
        return 4;
    } catch (const fisherlens::ConvergenceError& e) {
        std::cerr << "fisherlens: " << e.what() << "\n";
        return 3;
    } catch (const fisherlens::RejectionStallError& e) {
        std::cerr << "fisherlens: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "fisherlens: " << e.what() << "\n";
        return 2;
    }
}
