// SPDX-License-Identifier: Apache-2.0
//
// irsbeam - robust transmit power minimization for IRS-assisted MISO downlinks
// Copyright (C) 2026 the irsbeam authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.
// ------------------------------------------------------------------------------------------------
//
// Command-line front end.  Subcommands:
//   run      - solve one instance, write trace.csv, print a summary
//   sweep    - multi-trial sweep over N, M, beta, or gamma1 (dB), write sweep.csv
//   validate - config sanity check plus one tiny end-to-end solve
//
// Exit codes: 0 success, 1 usage/config error, 2 infeasible, 3 numerical failure.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <irsbeam/harness.hpp>

namespace
{

int exit_code_for(irsbeam::MaxRhoStatus s)
{
    switch (s)
    {
    case irsbeam::MaxRhoStatus::ok:
        return 0;
    case irsbeam::MaxRhoStatus::infeasible:
        return 2;
    default:
        return 3;
    }
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"irsbeam: robust transmit power minimization for IRS-assisted MISO downlinks"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed_override = 0;
    std::string axis = "N";
    std::vector<double> values;
    int trials = 0; // 0 means "use the configured trial count"

    CLI::App *run = app.add_subcommand("run", "solve one instance and write trace.csv");
    run->add_option("--config", config_path, "JSON configuration file")->required();
    run->add_option("--out", out_dir, "output directory (default: current)");
    run->add_option("--seed", seed_override, "override the configured channel seed");

    CLI::App *sweep = app.add_subcommand("sweep", "multi-trial sweep over one axis");
    sweep->add_option("--config", config_path, "JSON configuration file")->required();
    sweep->add_option("--axis", axis, "sweep axis: N, M, beta, or gamma1 (dB values)")
        ->required();
    sweep->add_option("--values", values, "axis values, space- or comma-separated")
        ->required()
        ->delimiter(',');
    sweep->add_option("--trials", trials, "trials per point (default: system.trials)");
    sweep->add_option("--out", out_dir, "output directory (default: current)");

    CLI::App *validate = app.add_subcommand("validate", "check the config and run a self-test");
    validate->add_option("--config", config_path, "JSON configuration file")->required();

    CLI11_PARSE(app, argc, argv);

    try
    {
        const irsbeam::ExperimentConfig cfg = irsbeam::load_config(config_path);

        if (run->parsed())
        {
            irsbeam::BeamformingSolution sol = irsbeam::run_single(cfg, out_dir, seed_override);
            std::cout << "status:     " << irsbeam::max_rho_status_name(sol.status) << "\n";
            if (sol.status == irsbeam::MaxRhoStatus::ok)
            {
                std::cout << "power_db:   " << irsbeam::linear_to_db(sol.power) << "\n"
                          << "rho:        " << sol.rho << "\n"
                          << "iterations: " << sol.iterations << "\n"
                          << "converged:  " << (sol.converged ? "yes" : "no") << "\n"
                          << "rank_ratio: " << sol.rank_ratio << "\n"
                          << "wc_snr:     " << sol.wc_snr << " (target " << cfg.system.gamma1
                          << ")\n"
                          << "wc_energy:  " << sol.wc_energy << " (demand "
                          << cfg.system.N * cfg.system.mu << ")\n";
            }
            else if (!sol.message.empty())
                std::cout << "detail:     " << sol.message << "\n";
            std::cout << "trace:      " << out_dir << "/trace.csv\n";
            return exit_code_for(sol.status);
        }

        if (sweep->parsed())
        {
            const int k = trials > 0 ? trials : cfg.system.trials;
            std::vector<irsbeam::SweepPoint> pts = irsbeam::run_sweep(cfg, axis, values, k);
            std::filesystem::create_directories(out_dir);
            const std::string path = out_dir + "/sweep.csv";
            irsbeam::write_sweep_csv(pts, path);
            int infeasible = 0;
            for (const auto &p : pts)
                infeasible += p.infeasible_count;
            std::cout << "sweep:      " << axis << " over " << pts.size() << " points, " << k
                      << " trials each\n"
                      << "infeasible: " << infeasible << "\n"
                      << "output:     " << path << "\n";
            return infeasible == static_cast<int>(pts.size()) * k ? 2 : 0;
        }

        if (validate->parsed())
        {
            std::cout << irsbeam::run_validate(cfg) << "\n";
            return 0;
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
