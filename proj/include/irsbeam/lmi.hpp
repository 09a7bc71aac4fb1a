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
// S-procedure reformulations of the two robust constraints as affine matrix inequalities in
// (W, t, tau), where W is the M-by-M transmit covariance.
//
// SNR side.  With aligned phases (Hf*theta = kappa_m*g, alpha = 1 + rho*kappa_m) the received
// SNR under a cascaded perturbation Delta is the quadratic
//
//   q1(Delta) = rho^2 (D*theta)^H W (D*theta) + 2*alpha*rho*Re{(D*theta)^H W g} + alpha^2 g^H W g
//
// (D = Delta), and q1 >= gamma1 for every ||Delta||_F <= delta_f iff there is t >= 0 with
//
//   [ rho^2 (conj(theta) theta^T) (x) W  +  t*I      alpha*rho*(conj(theta) (x) W g) ]
//   [ (.)^H                            alpha^2 g^H W g - gamma1 - t*delta_f^2 ]  PSD,
//
// using vec(Delta*theta) = (theta^T (x) I) vec(Delta) and the single-ball S-Lemma (exact).
//
// Energy side.  The incident power Tr((H+D)^H W (H+D)) >= c for every ||D||_F <= delta_h iff
// there is tau >= 0 with
//
//   [ I_N (x) W + tau*I        (I_N (x) W) vec(H) ]
//   [ (.)^H             vec(H)^H (I_N (x) W) vec(H) - c - tau*delta_h^2 ]  PSD.
//
// Both blocks admit exact order-(M+1) reductions used as the fast path for large N:
// the SNR top-left corner is rho^2 * P W P^H + t*I with P = conj(theta) (x) I_M, and the
// push-through identity P^H (rho^2 P W P^H + tI)^{-1} P = ||theta||^2 (rho^2 ||theta||^2 W + tI)^{-1}
// collapses the Schur complement to an order-(M+1) block in ||theta||.  The energy block is an
// arrow matrix whose Schur complement separates over columns of H, giving N order-(M+1) blocks
// with slack scalars sigma_n and one linear row.  Equivalence is exact, not a relaxation.

#pragma once

#include <stdexcept>
#include <vector>

#include "channel.hpp"
#include "conic.hpp"
#include "cxmat.hpp"
#include "params.hpp"

namespace irsbeam
{

// Reference SNR block of order M*N + 1.  Variables: W parameters (hermitian_basis layout,
// indices 0..M^2-1) and the multiplier t at t_index.
inline LmiBlock build_snr_lmi(const CVec &g, const CVec &theta, double kappa_m, double rho,
                              double delta_f, double gamma1, int t_index)
{
    const Eigen::Index M = g.size();
    const Eigen::Index N = theta.size();
    if (M < 1 || N < 1)
        throw std::invalid_argument("build_snr_lmi: empty channel");
    if (rho < 0.0 || rho > 1.0)
        throw std::invalid_argument("build_snr_lmi: rho must lie in [0, 1]");
    if (delta_f < 0.0 || !(gamma1 > 0.0) || kappa_m < 0.0)
        throw std::invalid_argument("build_snr_lmi: invalid scalar parameter");

    const double alpha = 1.0 + rho * kappa_m;
    const Eigen::Index d = M * N + 1;
    const CMat outer = theta.conjugate() * theta.transpose(); // (theta theta^H)^T

    LmiBlock blk;
    blk.order = d;
    blk.constant = CMat::Zero(d, d);
    blk.constant(d - 1, d - 1) = -gamma1;

    for (Eigen::Index k = 0; k < M * M; ++k)
    {
        const CMat B = hermitian_basis(M, k);
        CMat F = CMat::Zero(d, d);
        F.topLeftCorner(M * N, M * N) = (rho * rho) * kron(outer, B);
        const CVec Bg = B * g;
        for (Eigen::Index n = 0; n < N; ++n)
            F.block(n * M, d - 1, M, 1) = alpha * rho * std::conj(theta(n)) * Bg;
        F.block(d - 1, 0, 1, M * N) = F.block(0, d - 1, M * N, 1).adjoint();
        F(d - 1, d - 1) = alpha * alpha * (g.dot(Bg)).real();
        blk.coeffs.emplace_back(static_cast<int>(k), F);
    }

    CMat Ft = CMat::Identity(d, d);
    Ft(d - 1, d - 1) = -delta_f * delta_f;
    blk.coeffs.emplace_back(t_index, Ft);
    return blk;
}

// Reference energy block of order M*N + 1.  c is the required worst-case incident power.
inline LmiBlock build_energy_lmi(const CMat &H_bar, double delta_h, double c, int tau_index)
{
    const Eigen::Index M = H_bar.rows();
    const Eigen::Index N = H_bar.cols();
    if (M < 1 || N < 1)
        throw std::invalid_argument("build_energy_lmi: empty channel");
    if (delta_h < 0.0 || c < 0.0)
        throw std::invalid_argument("build_energy_lmi: invalid scalar parameter");

    const Eigen::Index d = M * N + 1;
    LmiBlock blk;
    blk.order = d;
    blk.constant = CMat::Zero(d, d);
    blk.constant(d - 1, d - 1) = -c;

    for (Eigen::Index k = 0; k < M * M; ++k)
    {
        const CMat B = hermitian_basis(M, k);
        CMat F = CMat::Zero(d, d);
        double corner = 0.0;
        for (Eigen::Index n = 0; n < N; ++n)
        {
            F.block(n * M, n * M, M, M) = B; // I_N (x) B
            const CVec Bh = B * H_bar.col(n);
            F.block(n * M, d - 1, M, 1) = Bh;
            corner += (H_bar.col(n).dot(Bh)).real();
        }
        F.block(d - 1, 0, 1, M * N) = F.block(0, d - 1, M * N, 1).adjoint();
        F(d - 1, d - 1) = corner;
        blk.coeffs.emplace_back(static_cast<int>(k), F);
    }

    CMat Ftau = CMat::Identity(d, d);
    Ftau(d - 1, d - 1) = -delta_h * delta_h;
    blk.coeffs.emplace_back(tau_index, Ftau);
    return blk;
}

// Exact order-(M+1) reduction of the SNR block.
inline LmiBlock build_snr_lmi_reduced(const CVec &g, const CVec &theta, double kappa_m, double rho,
                                      double delta_f, double gamma1, int t_index)
{
    const Eigen::Index M = g.size();
    if (M < 1 || theta.size() < 1)
        throw std::invalid_argument("build_snr_lmi_reduced: empty channel");
    if (rho < 0.0 || rho > 1.0)
        throw std::invalid_argument("build_snr_lmi_reduced: rho must lie in [0, 1]");
    if (delta_f < 0.0 || !(gamma1 > 0.0) || kappa_m < 0.0)
        throw std::invalid_argument("build_snr_lmi_reduced: invalid scalar parameter");

    const double alpha = 1.0 + rho * kappa_m;
    const double tn = theta.norm();
    const Eigen::Index d = M + 1;

    LmiBlock blk;
    blk.order = d;
    blk.constant = CMat::Zero(d, d);
    blk.constant(d - 1, d - 1) = -gamma1;

    for (Eigen::Index k = 0; k < M * M; ++k)
    {
        const CMat B = hermitian_basis(M, k);
        CMat F = CMat::Zero(d, d);
        F.topLeftCorner(M, M) = (rho * rho * tn * tn) * B;
        const CVec Bg = B * g;
        F.block(0, d - 1, M, 1) = alpha * rho * tn * Bg;
        F.block(d - 1, 0, 1, M) = F.block(0, d - 1, M, 1).adjoint();
        F(d - 1, d - 1) = alpha * alpha * (g.dot(Bg)).real();
        blk.coeffs.emplace_back(static_cast<int>(k), F);
    }

    CMat Ft = CMat::Identity(d, d);
    Ft(d - 1, d - 1) = -delta_f * delta_f;
    blk.coeffs.emplace_back(t_index, Ft);
    return blk;
}

// Exact reduction of the energy block: per-column arrow blocks plus one linear row.
// Block n reads [[W + tau*I, W*h_n], [(.)^H, sigma_n]]; the row is
// sum_n h_n^H W h_n - c - tau*delta_h^2 - sum_n sigma_n >= 0.
inline std::vector<LmiBlock> build_energy_lmi_reduced_blocks(const CMat &H_bar, int tau_index,
                                                             int sigma0_index)
{
    const Eigen::Index M = H_bar.rows();
    const Eigen::Index N = H_bar.cols();
    std::vector<LmiBlock> out;
    out.reserve(N);
    for (Eigen::Index n = 0; n < N; ++n)
    {
        LmiBlock blk;
        blk.order = M + 1;
        blk.constant = CMat::Zero(M + 1, M + 1);
        for (Eigen::Index k = 0; k < M * M; ++k)
        {
            const CMat B = hermitian_basis(M, k);
            CMat F = CMat::Zero(M + 1, M + 1);
            F.topLeftCorner(M, M) = B;
            F.block(0, M, M, 1) = B * H_bar.col(n);
            F.block(M, 0, 1, M) = F.block(0, M, M, 1).adjoint();
            blk.coeffs.emplace_back(static_cast<int>(k), F);
        }
        CMat Ftau = CMat::Zero(M + 1, M + 1);
        Ftau.topLeftCorner(M, M).setIdentity();
        blk.coeffs.emplace_back(tau_index, Ftau);
        CMat Fsig = CMat::Zero(M + 1, M + 1);
        Fsig(M, M) = 1.0;
        blk.coeffs.emplace_back(sigma0_index + static_cast<int>(n), Fsig);
        out.push_back(std::move(blk));
    }
    return out;
}

// Required worst-case incident power c = N*mu / (eta * (1 - rho^2)); zero demand gives c = 0
// for any rho (the constraint is vacuous), and rho = 1 with demand is rejected.
inline double energy_rhs(int N, double mu, double eta, double rho)
{
    if (mu == 0.0)
        return 0.0;
    if (!(rho < 1.0))
        throw std::invalid_argument("energy_rhs: rho must be < 1 when mu > 0");
    return static_cast<double>(N) * mu / (eta * (1.0 - rho * rho));
}

// Assemble the reference power-minimization SDP: minimize Tr(W) over W PSD, t, tau >= 0 with
// the two order-(M*N+1) S-procedure blocks.  Degenerate radii (delta = 0) replace a block by
// its exact singleton-uncertainty equivalent - a linear row - because the S-procedure block
// loses strictly feasible duals at delta = 0 and would stall the interior-point method.
inline ConicProblem assemble_sdp(const ChannelSet &cs, const CVec &theta, double kappa_m,
                                 double rho, const SystemParams &params)
{
    const int M = static_cast<int>(cs.g.size());
    const int nW = M * M;
    const double alpha = 1.0 + rho * kappa_m;
    const double c = energy_rhs(params.N, params.mu, params.eta, rho);

    ConicProblem prob;
    prob.layout.M = M;
    int nv = nW;
    const bool use_t = cs.delta_f > 0.0;
    // Zero demand makes the energy constraint vacuous; with it dropped the S-procedure block
    // (which would sit exactly on the PSD boundary) never enters the problem.
    const bool need_energy = params.mu > 0.0;
    const bool use_tau = need_energy && cs.delta_h > 0.0;
    if (use_t)
        prob.layout.idx_t = nv++;
    if (use_tau)
        prob.layout.idx_tau = nv++;
    prob.layout.num_vars = nv;

    prob.objective = RVec::Zero(nv);
    for (int p = 0; p < M; ++p)
        prob.objective(p) = 1.0; // Tr(W) = sum of diagonal parameters

    // W PSD block.
    LmiBlock wblk;
    wblk.order = M;
    wblk.constant = CMat::Zero(M, M);
    for (int k = 0; k < nW; ++k)
        wblk.coeffs.emplace_back(k, hermitian_basis(M, k));
    prob.add_hermitian_block(wblk);

    if (use_t)
    {
        prob.add_hermitian_block(
            build_snr_lmi(cs.g, theta, kappa_m, rho, cs.delta_f, params.gamma1, prob.layout.idx_t));
        prob.add_scalar_row(0.0, {{prob.layout.idx_t, 1.0}});
    }
    else
    {
        // Singleton uncertainty: alpha^2 g^H W g >= gamma1 exactly.
        std::vector<std::pair<int, double>> terms;
        for (int k = 0; k < nW; ++k)
        {
            const CMat B = hermitian_basis(M, k);
            terms.emplace_back(k, alpha * alpha * (cs.g.dot(B * cs.g)).real());
        }
        prob.add_scalar_row(-params.gamma1, terms);
    }

    if (use_tau)
    {
        prob.add_hermitian_block(build_energy_lmi(cs.H_bar, cs.delta_h, c, prob.layout.idx_tau));
        prob.add_scalar_row(0.0, {{prob.layout.idx_tau, 1.0}});
    }
    else if (need_energy)
    {
        // Singleton uncertainty: sum_n h_n^H W h_n >= c exactly.
        std::vector<std::pair<int, double>> terms;
        for (int k = 0; k < nW; ++k)
        {
            const CMat B = hermitian_basis(M, k);
            double v = 0.0;
            for (Eigen::Index n = 0; n < cs.H_bar.cols(); ++n)
                v += (cs.H_bar.col(n).dot(B * cs.H_bar.col(n))).real();
            terms.emplace_back(k, v);
        }
        prob.add_scalar_row(-c, terms);
    }
    return prob;
}

// Assemble the exact reduced SDP (fast path): order-(M+1) blocks only.
inline ConicProblem assemble_sdp_reduced(const ChannelSet &cs, const CVec &theta, double kappa_m,
                                         double rho, const SystemParams &params)
{
    const int M = static_cast<int>(cs.g.size());
    const int N = static_cast<int>(cs.H_bar.cols());
    const int nW = M * M;
    const double alpha = 1.0 + rho * kappa_m;
    const double c = energy_rhs(params.N, params.mu, params.eta, rho);

    ConicProblem prob;
    prob.layout.M = M;
    int nv = nW;
    const bool use_t = cs.delta_f > 0.0;
    const bool need_energy = params.mu > 0.0; // see assemble_sdp
    const bool use_tau = need_energy && cs.delta_h > 0.0;
    if (use_t)
        prob.layout.idx_t = nv++;
    if (use_tau)
    {
        prob.layout.idx_tau = nv++;
        prob.layout.idx_sigma = nv;
        prob.layout.n_sigma = N;
        nv += N;
    }
    prob.layout.num_vars = nv;

    prob.objective = RVec::Zero(nv);
    for (int p = 0; p < M; ++p)
        prob.objective(p) = 1.0;

    LmiBlock wblk;
    wblk.order = M;
    wblk.constant = CMat::Zero(M, M);
    for (int k = 0; k < nW; ++k)
        wblk.coeffs.emplace_back(k, hermitian_basis(M, k));
    prob.add_hermitian_block(wblk);

    if (use_t)
    {
        prob.add_hermitian_block(build_snr_lmi_reduced(cs.g, theta, kappa_m, rho, cs.delta_f,
                                                       params.gamma1, prob.layout.idx_t));
        prob.add_scalar_row(0.0, {{prob.layout.idx_t, 1.0}});
    }
    else
    {
        std::vector<std::pair<int, double>> terms;
        for (int k = 0; k < nW; ++k)
        {
            const CMat B = hermitian_basis(M, k);
            terms.emplace_back(k, alpha * alpha * (cs.g.dot(B * cs.g)).real());
        }
        prob.add_scalar_row(-params.gamma1, terms);
    }

    if (use_tau)
    {
        for (auto &blk :
             build_energy_lmi_reduced_blocks(cs.H_bar, prob.layout.idx_tau, prob.layout.idx_sigma))
            prob.add_hermitian_block(blk);
        // Linear row: sum_n h_n^H W h_n - c - tau*delta_h^2 - sum_n sigma_n >= 0.
        std::vector<std::pair<int, double>> terms;
        for (int k = 0; k < nW; ++k)
        {
            const CMat B = hermitian_basis(M, k);
            double v = 0.0;
            for (Eigen::Index n = 0; n < cs.H_bar.cols(); ++n)
                v += (cs.H_bar.col(n).dot(B * cs.H_bar.col(n))).real();
            terms.emplace_back(k, v);
        }
        terms.emplace_back(prob.layout.idx_tau, -cs.delta_h * cs.delta_h);
        for (int n = 0; n < N; ++n)
            terms.emplace_back(prob.layout.idx_sigma + n, -1.0);
        prob.add_scalar_row(-c, terms);
        prob.add_scalar_row(0.0, {{prob.layout.idx_tau, 1.0}});
    }
    else if (need_energy)
    {
        std::vector<std::pair<int, double>> terms;
        for (int k = 0; k < nW; ++k)
        {
            const CMat B = hermitian_basis(M, k);
            double v = 0.0;
            for (Eigen::Index n = 0; n < cs.H_bar.cols(); ++n)
                v += (cs.H_bar.col(n).dot(B * cs.H_bar.col(n))).real();
            terms.emplace_back(k, v);
        }
        prob.add_scalar_row(-c, terms);
    }
    return prob;
}

// Resolve the automatic formulation choice: reference blocks while they stay small, exact
// reduced blocks once M*N + 1 grows past 61 (realified order 122).
inline Formulation resolve_formulation(Formulation f, int M, int N)
{
    if (f != Formulation::automatic)
        return f;
    return (M * N + 1 <= 61) ? Formulation::lmi : Formulation::reduced;
}

inline ConicProblem build_power_min_sdp(const ChannelSet &cs, const CVec &theta, double kappa_m,
                                        double rho, const SystemParams &params, Formulation form)
{
    const int M = static_cast<int>(cs.g.size());
    const int N = static_cast<int>(cs.H_bar.cols());
    switch (resolve_formulation(form, M, N))
    {
    case Formulation::reduced:
        return assemble_sdp_reduced(cs, theta, kappa_m, rho, params);
    default:
        return assemble_sdp(cs, theta, kappa_m, rho, params);
    }
}

} // namespace irsbeam
