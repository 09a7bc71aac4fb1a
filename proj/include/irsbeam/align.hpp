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
// Phase alignment: find the largest kappa such that the reflected channel can be steered onto
// the direct one, Hf * theta ~ kappa * g, with relaxed per-element magnitudes |theta_n| <= 1.
//
// The feasibility residual r(kappa) = min_theta ||Hf*theta - kappa*g|| over the box is convex
// and nondecreasing in kappa (the reachable set {Hf*theta} is convex and balanced), so kappa_m
// is located by bisection.  Each inner problem is a small second-order cone program solved
// exactly by the conic backend: minimize s subject to ||Hf*theta - kappa*g|| <= s and
// |theta_n| <= 1, written as one arrow block of order M+1 plus N order-2 disk blocks.

#pragma once

#include <stdexcept>

#include "conic.hpp"
#include "cxmat.hpp"
#include "ipm.hpp"

namespace irsbeam
{

struct Alignment
{
    CVec theta;            // reflection coefficients, |theta_n| <= 1
    double kappa_m = 0.0;  // largest gain with residual below the threshold
    double residual = 0.0; // ||Hf*theta - kappa_m*g||, same units as ||g||
};

namespace detail
{

// Least-norm mismatch at fixed kappa: minimize s s.t. ||Hf*theta - kappa*g|| <= s, |theta_n| <= 1.
// Variable layout: (Re theta_n, Im theta_n) pairs, then s.  Inputs pre-normalized to ||g|| = 1.
inline ConicProblem build_align_subproblem(const CMat &Hf, const CVec &g, double kappa)
{
    const Eigen::Index M = Hf.rows();
    const Eigen::Index N = Hf.cols();
    const int idx_s = static_cast<int>(2 * N);

    ConicProblem prob;
    prob.layout.num_vars = static_cast<int>(2 * N + 1);
    prob.objective = RVec::Zero(2 * N + 1);
    prob.objective(idx_s) = 1.0;

    // Arrow block [[s*I, Hf*theta - kappa*g], [., s]] >= 0 <=> ||Hf*theta - kappa*g|| <= s.
    LmiBlock arrow;
    arrow.order = M + 1;
    arrow.constant = CMat::Zero(M + 1, M + 1);
    arrow.constant.block(0, M, M, 1) = -kappa * g;
    arrow.constant.block(M, 0, 1, M) = (-kappa * g).adjoint();
    CMat Fs = CMat::Identity(M + 1, M + 1);
    arrow.coeffs.emplace_back(idx_s, Fs);
    for (Eigen::Index n = 0; n < N; ++n)
    {
        CMat Fre = CMat::Zero(M + 1, M + 1);
        Fre.block(0, M, M, 1) = Hf.col(n);
        Fre.block(M, 0, 1, M) = Hf.col(n).adjoint();
        arrow.coeffs.emplace_back(static_cast<int>(2 * n), Fre);
        CMat Fim = CMat::Zero(M + 1, M + 1);
        Fim.block(0, M, M, 1) = cxd(0.0, 1.0) * Hf.col(n);
        Fim.block(M, 0, 1, M) = (cxd(0.0, 1.0) * Hf.col(n)).adjoint();
        arrow.coeffs.emplace_back(static_cast<int>(2 * n + 1), Fim);
    }
    prob.add_hermitian_block(arrow);

    // Disk blocks [[1, conj(theta_n)], [theta_n, 1]] >= 0 <=> |theta_n| <= 1.
    for (Eigen::Index n = 0; n < N; ++n)
    {
        LmiBlock disk;
        disk.order = 2;
        disk.constant = CMat::Identity(2, 2);
        CMat Dre = CMat::Zero(2, 2);
        Dre(0, 1) = 1.0;
        Dre(1, 0) = 1.0;
        disk.coeffs.emplace_back(static_cast<int>(2 * n), Dre);
        CMat Dim = CMat::Zero(2, 2);
        Dim(0, 1) = cxd(0.0, -1.0);
        Dim(1, 0) = cxd(0.0, 1.0);
        disk.coeffs.emplace_back(static_cast<int>(2 * n + 1), Dim);
        prob.add_hermitian_block(disk);
    }
    return prob;
}

inline bool align_residual(const CMat &Hf, const CVec &g, double kappa, double &resid, CVec &theta)
{
    ConicProblem prob = build_align_subproblem(Hf, g, kappa);
    SolverOptions sopt;
    sopt.tol = 1e-9;
    ConicResult r = solve(prob, sopt);
    if (r.status != SolveStatus::optimal)
        return false;
    const Eigen::Index N = Hf.cols();
    theta.resize(N);
    for (Eigen::Index n = 0; n < N; ++n)
        theta(n) = cxd(r.x(2 * n), r.x(2 * n + 1));
    resid = std::max(0.0, r.x(2 * N));
    return true;
}

} // namespace detail

// Maximize kappa subject to ||Hf*theta - kappa*g|| <= tol * ||g||, |theta_n| <= 1.
//
// kappa is certified to lie within 1e-6 * kappa_hi of the maximum, where kappa_hi =
// sum_n |g^H Hf e_n| / ||g||^2 + 2*tol upper-bounds every feasible gain (each element
// contributes at most its aligned projection onto g, plus the residual allowance).
inline Alignment align_phases(const CMat &Hf_bar, const CVec &g, double tol = 1e-3)
{
    if (Hf_bar.rows() != g.size())
        throw std::invalid_argument("align_phases: dimension mismatch");
    if (!(tol > 0.0))
        throw std::invalid_argument("align_phases: tolerance must be positive");
    const double gn = g.norm();
    if (gn == 0.0)
        throw std::invalid_argument("align_phases: direct channel must be nonzero");

    const CVec gh = g / gn;
    const CMat Hh = Hf_bar / gn;

    double kappa_hi = 2.0 * tol;
    for (Eigen::Index n = 0; n < Hh.cols(); ++n)
        kappa_hi += std::abs(gh.dot(Hh.col(n)));

    Alignment best;
    best.theta = CVec::Zero(Hf_bar.cols());
    best.kappa_m = 0.0;
    best.residual = 0.0;

    double lo = 0.0, hi = kappa_hi;
    const double resolution = 1e-6 * kappa_hi;
    CVec theta;
    double resid;
    // theta = 0 solves kappa = 0 exactly, so `lo` always carries a feasible witness.
    while (hi - lo > resolution)
    {
        const double mid = 0.5 * (lo + hi);
        if (!detail::align_residual(Hh, gh, mid, resid, theta))
            throw std::runtime_error("align_phases: inner solve failed");
        if (resid <= tol)
        {
            lo = mid;
            best.theta = theta;
            best.kappa_m = mid;
            best.residual = resid * gn;
        }
        else
            hi = mid;
    }
    return best;
}

} // namespace irsbeam
