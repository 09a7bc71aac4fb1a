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
// Experiment harness: JSON configuration, single solves with per-iteration trace output, and
// multi-trial parameter sweeps with common random numbers across sweep points.  All CSV output
// uses fixed printf formats so reruns are byte-identical.

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "channel.hpp"
#include "maxrho.hpp"
#include "params.hpp"
#include "rng.hpp"

namespace irsbeam
{

struct ExperimentConfig
{
    SystemParams system;
    Topology topology;
    SolverOptions solver;
    AlgorithmOptions algorithm;
};

namespace detail
{

inline void reject_unknown_keys(const nlohmann::json &j, const std::string &scope,
                                std::initializer_list<const char *> known)
{
    for (auto it = j.begin(); it != j.end(); ++it)
    {
        bool ok = false;
        for (const char *k : known)
            if (it.key() == k)
            {
                ok = true;
                break;
            }
        if (!ok)
            throw std::invalid_argument("config: unknown key \"" + scope + "." + it.key() + "\"");
    }
}

} // namespace detail

// Parse a configuration from JSON.  All keys are optional; absent keys keep their defaults.
// Unknown keys are an error so that typos surface instead of silently using defaults.
// The SNR target is given in dB ("gamma1_db") and stored linearly.
inline ExperimentConfig parse_config(const nlohmann::json &j)
{
    ExperimentConfig cfg;
    detail::reject_unknown_keys(j, "", {"system", "topology", "solver", "algorithm"});

    if (j.contains("system"))
    {
        const auto &s = j.at("system");
        detail::reject_unknown_keys(s, "system",
                                    {"M", "N", "gamma1_db", "eta", "mu", "beta", "epsilon",
                                     "trials", "seed", "noise_floor_dbm"});
        if (s.contains("M"))
            cfg.system.M = s.at("M").get<int>();
        if (s.contains("N"))
            cfg.system.N = s.at("N").get<int>();
        if (s.contains("gamma1_db"))
            cfg.system.gamma1 = db_to_linear(s.at("gamma1_db").get<double>());
        if (s.contains("eta"))
            cfg.system.eta = s.at("eta").get<double>();
        if (s.contains("mu"))
            cfg.system.mu = s.at("mu").get<double>();
        if (s.contains("beta"))
            cfg.system.beta = s.at("beta").get<double>();
        if (s.contains("epsilon"))
            cfg.system.epsilon = s.at("epsilon").get<double>();
        if (s.contains("trials"))
            cfg.system.trials = s.at("trials").get<int>();
        if (s.contains("seed"))
            cfg.system.seed = s.at("seed").get<std::uint64_t>();
        if (s.contains("noise_floor_dbm"))
            cfg.system.noise_floor_dbm = s.at("noise_floor_dbm").get<double>();
    }
    if (j.contains("topology"))
    {
        const auto &t = j.at("topology");
        detail::reject_unknown_keys(t, "topology",
                                    {"ap_x", "ap_y", "irs_x", "irs_y", "rx_x", "rx_y"});
        if (t.contains("ap_x"))
            cfg.topology.ap(0) = t.at("ap_x").get<double>();
        if (t.contains("ap_y"))
            cfg.topology.ap(1) = t.at("ap_y").get<double>();
        if (t.contains("irs_x"))
            cfg.topology.irs(0) = t.at("irs_x").get<double>();
        if (t.contains("irs_y"))
            cfg.topology.irs(1) = t.at("irs_y").get<double>();
        if (t.contains("rx_x"))
            cfg.topology.rx(0) = t.at("rx_x").get<double>();
        if (t.contains("rx_y"))
            cfg.topology.rx(1) = t.at("rx_y").get<double>();
    }
    if (j.contains("solver"))
    {
        const auto &s = j.at("solver");
        detail::reject_unknown_keys(s, "solver", {"tol", "max_iters", "formulation"});
        if (s.contains("tol"))
            cfg.solver.tol = s.at("tol").get<double>();
        if (s.contains("max_iters"))
            cfg.solver.max_iters = s.at("max_iters").get<int>();
        if (s.contains("formulation"))
            cfg.solver.formulation = formulation_from_name(s.at("formulation").get<std::string>());
    }
    if (j.contains("algorithm"))
    {
        const auto &a = j.at("algorithm");
        detail::reject_unknown_keys(a, "algorithm",
                                    {"rho_init", "max_iters", "stall_tol", "n_randomizations",
                                     "rank_one_tol", "align_tol", "recompute_alignment"});
        if (a.contains("rho_init"))
            cfg.algorithm.rho_init = a.at("rho_init").get<double>();
        if (a.contains("max_iters"))
            cfg.algorithm.max_iters = a.at("max_iters").get<int>();
        if (a.contains("stall_tol"))
            cfg.algorithm.stall_tol = a.at("stall_tol").get<double>();
        if (a.contains("n_randomizations"))
            cfg.algorithm.n_randomizations = a.at("n_randomizations").get<int>();
        if (a.contains("rank_one_tol"))
            cfg.algorithm.rank_one_tol = a.at("rank_one_tol").get<double>();
        if (a.contains("align_tol"))
            cfg.algorithm.align_tol = a.at("align_tol").get<double>();
        if (a.contains("recompute_alignment"))
            cfg.algorithm.recompute_alignment = a.at("recompute_alignment").get<bool>();
    }
    cfg.system.validate();
    cfg.topology.validate();
    cfg.solver.validate();
    cfg.algorithm.validate();
    return cfg;
}

inline ExperimentConfig load_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("config: cannot open " + path);
    nlohmann::json j;
    in >> j;
    return parse_config(j);
}

// Outcome of one solve, flattened for reporting.
struct TrialResult
{
    MaxRhoStatus status = MaxRhoStatus::numerical_failure;
    double power_db = 0.0;
    double rho = 0.0;
    int iterations = 0;
    bool converged = false;
};

inline TrialResult run_trial(const ExperimentConfig &cfg, std::uint64_t seed)
{
    ChannelSet cs = generate_channels(cfg.system, cfg.topology, seed);
    BeamformingSolution sol = max_rho_solve(cs, cfg.system, cfg.algorithm, cfg.solver);
    TrialResult tr;
    tr.status = sol.status;
    tr.rho = sol.rho;
    tr.iterations = sol.iterations;
    tr.converged = sol.converged;
    if (sol.status == MaxRhoStatus::ok)
        tr.power_db = linear_to_db(sol.power);
    return tr;
}

// Solve a single instance, write the per-iteration trace to <out_dir>/trace.csv, and return
// the full solution.  The seed_override, when nonzero, replaces the configured seed.
inline BeamformingSolution run_single(const ExperimentConfig &cfg, const std::string &out_dir,
                                      std::uint64_t seed_override = 0)
{
    const std::uint64_t seed = seed_override ? seed_override : cfg.system.seed;
    ChannelSet cs = generate_channels(cfg.system, cfg.topology, seed);
    BeamformingSolution sol = max_rho_solve(cs, cfg.system, cfg.algorithm, cfg.solver);

    std::filesystem::create_directories(out_dir);
    const std::string path = out_dir + "/trace.csv";
    std::FILE *f = std::fopen(path.c_str(), "w");
    if (!f)
        throw std::runtime_error("cannot write " + path);
    std::fprintf(f, "iter,trace_w,rho,power_db\n");
    for (const IterationRecord &r : sol.trace)
        std::fprintf(f, "%d,%.12e,%.9f,%.6f\n", r.iter, r.trace_w, r.rho, r.power_db);
    std::fclose(f);
    return sol;
}

struct SweepPoint
{
    double axis_value = 0.0;
    double power_db_mean = 0.0;
    double power_db_std = 0.0;
    double rho_mean = 0.0;
    double iters_mean = 0.0;
    int infeasible_count = 0;
};

// Apply one sweep-axis value to a copy of the base configuration.
inline ExperimentConfig apply_axis(const ExperimentConfig &base, const std::string &axis,
                                   double value)
{
    ExperimentConfig cfg = base;
    if (axis == "N")
        cfg.system.N = static_cast<int>(value);
    else if (axis == "M")
        cfg.system.M = static_cast<int>(value);
    else if (axis == "beta")
        cfg.system.beta = value;
    else if (axis == "gamma1")
        cfg.system.gamma1 = db_to_linear(value); // axis values are in dB
    else
        throw std::invalid_argument("sweep: unknown axis \"" + axis +
                                    "\" (expected N, M, beta, or gamma1)");
    cfg.system.validate();
    return cfg;
}

// Multi-trial sweep over one axis.  Trial i uses the same derived seed at every sweep point
// (common random numbers), so cross-point differences reflect the parameter change rather
// than channel realization noise.  Statistics are over feasible trials; the mean and sample
// standard deviation are computed on the dB scale.
inline std::vector<SweepPoint> run_sweep(const ExperimentConfig &base, const std::string &axis,
                                         const std::vector<double> &values, int trials)
{
    if (trials <= 0)
        throw std::invalid_argument("sweep: trials must be positive");
    std::vector<SweepPoint> points;
    points.reserve(values.size());
    for (double v : values)
    {
        const ExperimentConfig cfg = apply_axis(base, axis, v);
        std::vector<std::future<TrialResult>> futs;
        futs.reserve(static_cast<std::size_t>(trials));
        for (int i = 0; i < trials; ++i)
        {
            const std::uint64_t seed =
                derive_seed(base.system.seed, {'T', static_cast<std::uint64_t>(i)});
            futs.push_back(
                std::async(std::launch::async, [cfg, seed] { return run_trial(cfg, seed); }));
        }
        SweepPoint pt;
        pt.axis_value = v;
        std::vector<double> dbs;
        double rho_sum = 0.0, iter_sum = 0.0;
        for (auto &fu : futs)
        {
            TrialResult tr = fu.get();
            if (tr.status == MaxRhoStatus::ok)
            {
                dbs.push_back(tr.power_db);
                rho_sum += tr.rho;
                iter_sum += tr.iterations;
            }
            else
                ++pt.infeasible_count;
        }
        if (!dbs.empty())
        {
            const double n = static_cast<double>(dbs.size());
            double mean = 0.0;
            for (double d : dbs)
                mean += d;
            mean /= n;
            double var = 0.0;
            for (double d : dbs)
                var += (d - mean) * (d - mean);
            pt.power_db_mean = mean;
            pt.power_db_std = (dbs.size() >= 2) ? std::sqrt(var / (n - 1.0)) : 0.0;
            pt.rho_mean = rho_sum / n;
            pt.iters_mean = iter_sum / n;
        }
        points.push_back(pt);
    }
    return points;
}

inline void write_sweep_csv(const std::vector<SweepPoint> &points, const std::string &path)
{
    std::FILE *f = std::fopen(path.c_str(), "w");
    if (!f)
        throw std::runtime_error("cannot write " + path);
    std::fprintf(f, "axis_value,power_db_mean,power_db_std,rho_mean,iters_mean,infeasible_count\n");
    for (const SweepPoint &p : points)
        std::fprintf(f, "%.6f,%.6f,%.6f,%.9f,%.3f,%d\n", p.axis_value, p.power_db_mean,
                     p.power_db_std, p.rho_mean, p.iters_mean, p.infeasible_count);
    std::fclose(f);
}

// Quick end-to-end self-check used by the CLI: one tiny instance solved and certified.
// Returns a human-readable report; throws on failure.
inline std::string run_validate(const ExperimentConfig &cfg)
{
    SystemParams small = cfg.system;
    small.M = std::min(small.M, 2);
    small.N = std::min(small.N, 4);
    ChannelSet cs = generate_channels(small, cfg.topology, small.seed);
    BeamformingSolution sol = max_rho_solve(cs, small, cfg.algorithm, cfg.solver);
    if (sol.status != MaxRhoStatus::ok)
        throw std::runtime_error("validate: solve ended with status " +
                                 max_rho_status_name(sol.status));
    const double slack_snr = sol.wc_snr - small.gamma1;
    if (slack_snr < -1e-6 * small.gamma1)
        throw std::runtime_error("validate: worst-case SNR violates the target");
    if (small.mu > 0.0)
    {
        const double need = static_cast<double>(small.N) * small.mu;
        if (sol.wc_energy - need < -1e-6 * need)
            throw std::runtime_error("validate: worst-case harvested energy below demand");
    }
    std::ostringstream os;
    os << "validate: ok (power=" << linear_to_db(sol.power) << " dB, rho=" << sol.rho
       << ", iters=" << sol.iterations << ", wc_snr_slack=" << slack_snr << ")";
    return os.str();
}

} // namespace irsbeam
