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

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace irsbeam
{

inline double db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

inline double linear_to_db(double lin)
{
    if (lin <= 0.0)
        throw std::invalid_argument("linear_to_db: value must be positive");
    return 10.0 * std::log10(lin);
}

// Node placement in the plane, in meters.
struct Topology
{
    Eigen::Vector2d ap{0.0, 0.0};  // access point
    Eigen::Vector2d irs{5.0, 1.0}; // reflecting surface
    Eigen::Vector2d rx{8.0, 0.0};  // receiver

    double dist_ap_irs() const { return (ap - irs).norm(); }
    double dist_irs_rx() const { return (irs - rx).norm(); }
    double dist_ap_rx() const { return (ap - rx).norm(); }

    void validate() const
    {
        if (!(dist_ap_irs() > 0.0))
            throw std::invalid_argument("topology: ap and irs positions must differ");
        if (!(dist_irs_rx() > 0.0))
            throw std::invalid_argument("topology: irs and rx positions must differ");
        if (!(dist_ap_rx() > 0.0))
            throw std::invalid_argument("topology: ap and rx positions must differ");
    }
};

// Scenario parameters.  All powers are normalized to the noise floor (noise power = 1); the
// noise_floor_dbm reference is used only to convert reported powers to dBm.
struct SystemParams
{
    int M = 2;                  // transmit antennas
    int N = 20;                 // reflecting elements
    double gamma1 = 1000.0;     // SNR target, linear (30 dB)
    double eta = 0.8;           // energy harvesting efficiency
    double mu = 20.0;           // per-element power draw, noise-normalized
    double beta = 0.1;          // uncertainty factor: delta^2 = beta * ||nominal||_F^2
    double epsilon = 1e-5;      // convergence threshold on the relative trace change
    int trials = 10;            // Monte-Carlo trials per sweep point
    std::uint64_t seed = 20260817ULL;
    double noise_floor_dbm = -90.0; // reporting reference only

    void validate() const
    {
        if (M < 1)
            throw std::invalid_argument("system.M: must be >= 1");
        if (N < 1)
            throw std::invalid_argument("system.N: must be >= 1");
        if (!(gamma1 > 0.0))
            throw std::invalid_argument("system.gamma1_db: SNR target must be positive (linear)");
        if (!(eta > 0.0) || eta > 1.0)
            throw std::invalid_argument("system.eta: must lie in (0, 1]");
        if (mu < 0.0)
            throw std::invalid_argument("system.mu: must be >= 0");
        if (beta < 0.0)
            throw std::invalid_argument("system.beta: must be >= 0");
        if (!(epsilon > 0.0))
            throw std::invalid_argument("system.epsilon: must be > 0");
        if (trials < 1)
            throw std::invalid_argument("system.trials: must be >= 1");
    }
};

// Outer-loop knobs (power minimization loop and solution extraction).
struct AlgorithmOptions
{
    double rho_init = 0.05;      // initial power-splitting ratio
    int max_iters = 200;         // outer iteration cap
    double stall_tol = 1e-9;     // stop when rho moves less than this
    int n_randomizations = 1000; // Gaussian candidates when the SDP solution is not rank-one
    double rank_one_tol = 1e-6;  // eigenvalue ratio below which W counts as rank-one
    double align_tol = 1e-3;     // alignment residual threshold, relative to ||g||
    bool recompute_alignment = false; // re-run phase alignment every outer iteration

    void validate() const
    {
        if (!(rho_init > 0.0) || rho_init >= 1.0)
            throw std::invalid_argument("algorithm.rho_init: must lie in (0, 1)");
        if (max_iters < 1)
            throw std::invalid_argument("algorithm.max_iters: must be >= 1");
        if (!(stall_tol >= 0.0))
            throw std::invalid_argument("algorithm.stall_tol: must be >= 0");
        if (n_randomizations < 1)
            throw std::invalid_argument("algorithm.n_randomizations: must be >= 1");
        if (!(rank_one_tol > 0.0))
            throw std::invalid_argument("algorithm.rank_one_tol: must be > 0");
        if (!(align_tol > 0.0))
            throw std::invalid_argument("algorithm.align_tol: must be > 0");
    }
};

// Conic solve layer knobs.
enum class Formulation
{
    automatic, // reference LMI form for small instances, reduced form for large ones
    lmi,       // full S-procedure blocks of order M*N + 1
    reduced    // exact order-(M+1) reduction
};

struct SolverOptions
{
    double tol = 1e-8;   // relative duality gap and feasibility target
    int max_iters = 150; // interior-point iteration cap
    Formulation formulation = Formulation::automatic;

    void validate() const
    {
        if (!(tol > 0.0) || tol >= 1.0)
            throw std::invalid_argument("solver.tol: must lie in (0, 1)");
        if (max_iters < 1)
            throw std::invalid_argument("solver.max_iters: must be >= 1");
    }
};

inline std::string formulation_name(Formulation f)
{
    switch (f)
    {
    case Formulation::automatic:
        return "auto";
    case Formulation::lmi:
        return "lmi";
    case Formulation::reduced:
        return "reduced";
    }
    return "unknown";
}

inline Formulation formulation_from_name(const std::string &s)
{
    if (s == "auto" || s == "automatic")
        return Formulation::automatic;
    if (s == "lmi")
        return Formulation::lmi;
    if (s == "reduced")
        return Formulation::reduced;
    throw std::invalid_argument("solver.formulation: expected one of auto|lmi|reduced, got '" + s + "'");
}

} // namespace irsbeam
