// SPDX-License-Identifier: Apache-2.0
//
// ris-pdpr: pilot power and RIS phase configuration for RIS-assisted uplink MIMO
// Copyright (C) 2026 The ris-pdpr authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// ris-pdpr command line tool.
//
//   ris-pdpr --experiment fig1 --out fig1.csv
//   ris-pdpr --config configs/validate.json --seed 7 --trials 50000
//
// Exit codes: 0 success, 1 validation failure, 2 configuration error.

#include "ris_pdpr.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <optional>
#include <string>

int main(int argc, char **argv)
{
    namespace ex = ris_pdpr::experiments;

    CLI::App app{"Pilot/data power ratio and RIS phase experiments for RIS-assisted uplink MIMO"};
    std::optional<std::string> config_path;
    std::optional<std::string> experiment;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::string> out;
    std::optional<unsigned> threads;
    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--experiment", experiment, "fig1 | fig2 | optimize-ris | validate");
    app.add_option("--seed", seed, "base RNG seed");
    app.add_option("--trials", trials, "Monte Carlo trials per grid point")->check(CLI::PositiveNumber);
    app.add_option("--out", out, "output path");
    app.add_option("--threads", threads, "worker threads (0: all cores)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? ex::exit_success : ex::exit_config_error;
    }

    try
    {
        ex::ExperimentConfig config;
        if (config_path)
            config = ex::parse_config(ex::ConfigSource(*config_path, ex::read_text_file(*config_path)));
        if (experiment)
        {
            const auto e = ex::parse_experiment(*experiment);
            if (!e)
                throw ex::ConfigError("--experiment: unknown experiment \"" + *experiment +
                                      "\" (fig1, fig2, optimize-ris, validate)");
            config.experiment = *e;
        }
        if (seed)
            config.seed = *seed;
        if (trials)
            config.trials = *trials;
        if (out)
            config.outputPath = *out;
        if (threads)
            config.threads = *threads;
        ex::validate_config(config, ex::ConfigSource("command line", ""));

        const int code = ex::run_experiment(config);
        if (code == ex::exit_validation_failure)
            std::cerr << "ris-pdpr: validation failed, see " << ex::output_path(config) << "\n";
        return code;
    }
    catch (const ex::ConfigError &e)
    {
        std::cerr << "ris-pdpr: configuration error: " << e.what() << "\n";
        return ex::exit_config_error;
    }
    catch (const std::exception &e)
    {
        // invalid parameter combinations surface from the library as exceptions
        std::cerr << "ris-pdpr: " << e.what() << "\n";
        return ex::exit_config_error;
    }
}
