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

#include "cxmat.hpp"
#include "params.hpp"
#include "rng.hpp"

namespace irsbeam
{

// Log-distance path loss: 30 dB at 1 m, exponent 2.
inline double path_loss_db(double distance_m)
{
    if (!(distance_m > 0.0))
        throw std::invalid_argument("path_loss_db: distance must be positive");
    return 30.0 + 20.0 * std::log10(distance_m);
}

inline double path_gain_linear(double distance_m)
{
    return std::pow(10.0, -path_loss_db(distance_m) / 10.0);
}

// Rayleigh-faded channel draws and Frobenius-ball uncertainty radii for one scenario.
struct ChannelSet
{
    CVec g;      // direct AP -> RX channel, length M
    CMat H_bar;  // nominal AP -> IRS channel, M x N
    CVec f_bar;  // nominal IRS -> RX channel, length N
    CMat Hf_bar; // nominal cascaded channel H_bar * diag(f_bar), M x N
    double delta_h = 0.0; // radius of the AP->IRS uncertainty ball
    double delta_f = 0.0; // radius of the cascaded-channel uncertainty ball
};

// Cascaded AP -> IRS -> RX channel: column n is f_n * h_n, i.e. H * diag(f).
inline CMat cascaded_channel(const CMat &H, const CVec &f)
{
    if (H.cols() != f.size())
        throw std::invalid_argument("cascaded_channel: H columns must match f length");
    return H * f.asDiagonal();
}

// Uncertainty ball radius delta with delta^2 = beta * ||nominal||_F^2.
inline double uncertainty_radius(double beta, const CMat &nominal)
{
    if (beta < 0.0)
        throw std::invalid_argument("uncertainty_radius: beta must be >= 0");
    return std::sqrt(beta) * nominal.norm();
}

// Draw a perturbation matrix from the Frobenius ball of the given radius: uniform on the
// boundary sphere, or uniform over the solid ball.  A Gaussian draw fixes the direction; for
// the solid ball the length is radius * u^(1/d) with d the number of real dimensions.
inline CMat sample_perturbation(Rng &rng, double radius, Eigen::Index rows, Eigen::Index cols,
                                bool on_boundary)
{
    if (radius < 0.0)
        throw std::invalid_argument("sample_perturbation: radius must be >= 0");
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("sample_perturbation: dimensions must be >= 1");
    CMat G(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            G(i, j) = rng.cnormal();
    double norm = G.norm();
    if (norm == 0.0)
        return CMat::Zero(rows, cols); // measure-zero Gaussian corner case
    double len = radius;
    if (!on_boundary)
    {
        double d = 2.0 * static_cast<double>(rows * cols);
        len = radius * std::pow(rng.uniform(), 1.0 / d);
    }
    return (len / norm) * G;
}

// Generate all nominal channels for a scenario.  Entries are sqrt(linear path gain) * CN(0,1).
//
// Stream layout: g, f_bar, and each column of H_bar draw from independent substreams derived
// from (seed, tag[, column]).  Because entries are consumed in index order within a substream,
// a scenario with smaller M or N reproduces a leading sub-block of a larger one under the same
// seed - sweeps over M or N then compare curves on common random channels.
inline ChannelSet generate_channels(const SystemParams &params, const Topology &topo,
                                    std::uint64_t seed)
{
    params.validate();
    topo.validate();

    const int M = params.M;
    const int N = params.N;
    const double amp_g = std::sqrt(path_gain_linear(topo.dist_ap_rx()));
    const double amp_h = std::sqrt(path_gain_linear(topo.dist_ap_irs()));
    const double amp_f = std::sqrt(path_gain_linear(topo.dist_irs_rx()));

    ChannelSet cs;
    cs.g.resize(M);
    Rng rng_g(derive_seed(seed, {'g'}));
    for (int i = 0; i < M; ++i)
        cs.g(i) = amp_g * rng_g.cnormal();

    cs.f_bar.resize(N);
    Rng rng_f(derive_seed(seed, {'f'}));
    for (int n = 0; n < N; ++n)
        cs.f_bar(n) = amp_f * rng_f.cnormal();

    cs.H_bar.resize(M, N);
    for (int n = 0; n < N; ++n)
    {
        Rng rng_h(derive_seed(seed, {'H', static_cast<std::uint64_t>(n)}));
        for (int i = 0; i < M; ++i)
            cs.H_bar(i, n) = amp_h * rng_h.cnormal();
    }

    cs.Hf_bar = cascaded_channel(cs.H_bar, cs.f_bar);
    cs.delta_h = uncertainty_radius(params.beta, cs.H_bar);
    cs.delta_f = uncertainty_radius(params.beta, cs.Hf_bar);
    return cs;
}

} // namespace irsbeam
