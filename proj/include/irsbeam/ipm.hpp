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
// Primal-dual interior-point method for linear matrix inequalities:
//
//   minimize    c'x
//   subject to  A_k(x) = F0_k + sum_i x_i F_{k,i}  PSD,   k = 1..K
//
// with real symmetric blocks.  The Lagrangian dual is
//
//   maximize   -sum_k <F0_k, Z_k>
//   subject to  sum_k <F_{k,i}, Z_k> = c_i  for every i,    Z_k PSD,
//
// and the method tracks the central path S_k Z_k = mu*I from an infeasible start with the
// HKM direction and a Mehrotra predictor-corrector.  Eliminating (dS, dZ) from the Newton
// system leaves the m-by-m Schur equation
//
//   sum_k Tr(F_{k,i} Z_k F_{k,j} S_k^-1) dx_j = sum_k <F_{k,i}, (sigma*mu*I - E_k) S_k^-1> - c_i
//
// with E_k = dZ_aff dS_aff in the corrector (zero in the predictor); the matrix is symmetric
// positive definite whenever the F_{k,i} are linearly independent.  Blocks store only the
// variables that actually touch them, so many small blocks stay cheap.

#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "cxmat.hpp"

namespace irsbeam
{

enum class SolveStatus
{
    optimal,
    infeasible,
    unbounded,
    numerical_failure
};

inline std::string solve_status_name(SolveStatus s)
{
    switch (s)
    {
    case SolveStatus::optimal:
        return "optimal";
    case SolveStatus::infeasible:
        return "infeasible";
    case SolveStatus::unbounded:
        return "unbounded";
    case SolveStatus::numerical_failure:
        return "numerical_failure";
    }
    return "unknown";
}

struct SolverStats
{
    int iterations = 0;
    double rel_gap = std::numeric_limits<double>::quiet_NaN();
    double primal_res = std::numeric_limits<double>::quiet_NaN();
    double dual_res = std::numeric_limits<double>::quiet_NaN();
};

// One real symmetric affine block: constant + sum over (var, coeff) pairs.
struct RealBlock
{
    Eigen::Index order = 0;
    RMat constant;
    std::vector<std::pair<int, RMat>> coeffs;
};

namespace ipm
{

struct Options
{
    double tol = 1e-8;          // relative duality gap target
    double feas_tol = 1e-8;     // primal/dual residual target (relative)
    int max_iters = 150;
    double frac_boundary = 0.98;
    double sigma_min = 1e-8;    // centering floor
};

struct Result
{
    SolveStatus status = SolveStatus::numerical_failure;
    RVec x;
    double pobj = std::numeric_limits<double>::quiet_NaN();
    double dobj = std::numeric_limits<double>::quiet_NaN();
    SolverStats stats;
};

namespace detail
{

inline double inner(const RMat &A, const RMat &B)
{
    return (A.array() * B.array()).sum();
}

// Largest step alpha in [0, cap] keeping S + alpha*dS positive definite, computed from the
// smallest eigenvalue of L^-1 dS L^-T where S = L L^T.
inline double max_psd_step(const Eigen::LLT<RMat> &llt, const RMat &dS, double cap)
{
    const RMat &L = llt.matrixL();
    RMat Y = L.triangularView<Eigen::Lower>().solve(dS);
    RMat G = L.triangularView<Eigen::Lower>().solve(Y.transpose());
    G = 0.5 * (G + G.transpose()).eval();
    double lmin;
    if (G.rows() == 1)
        lmin = G(0, 0);
    else
    {
        Eigen::SelfAdjointEigenSolver<RMat> es(G, Eigen::EigenvaluesOnly);
        lmin = es.eigenvalues().minCoeff();
    }
    if (lmin >= -1e-16)
        return cap;
    return std::min(cap, -1.0 / lmin);
}

} // namespace detail

// Solve the block LMI problem.  Blocks are copied and rescaled internally (per-block data
// scaling leaves the feasible set and both objective values unchanged).
inline Result solve(const RVec &c, const std::vector<RealBlock> &blocks_in, const Options &opt = {})
{
    using detail::inner;
    const int m = static_cast<int>(c.size());
    const int K = static_cast<int>(blocks_in.size());

    Result res;
    res.x = RVec::Zero(m);
    if (m == 0 || K == 0)
        throw std::invalid_argument("ipm::solve: empty problem");

    // --- per-block data scaling ------------------------------------------------------------
    std::vector<RealBlock> blocks = blocks_in;
    double total_dim = 0.0;
    for (auto &b : blocks)
    {
        if (b.constant.rows() != b.order || b.constant.cols() != b.order)
            throw std::invalid_argument("ipm::solve: block constant has wrong shape");
        double scale = b.constant.cwiseAbs().maxCoeff();
        for (auto &[idx, F] : b.coeffs)
        {
            if (idx < 0 || idx >= m)
                throw std::invalid_argument("ipm::solve: coefficient index out of range");
            if (F.rows() != b.order || F.cols() != b.order)
                throw std::invalid_argument("ipm::solve: coefficient has wrong shape");
            scale = std::max(scale, F.cwiseAbs().maxCoeff());
        }
        if (scale <= 0.0)
            throw std::invalid_argument("ipm::solve: block with all-zero data");
        b.constant /= scale;
        for (auto &[idx, F] : b.coeffs)
            F /= scale;
        total_dim += static_cast<double>(b.order);
    }
    const double c_scale = std::max(1.0, c.cwiseAbs().maxCoeff());

    // --- state -----------------------------------------------------------------------------
    RVec x = RVec::Zero(m);
    std::vector<RMat> S(K), Z(K);
    for (int k = 0; k < K; ++k)
    {
        const Eigen::Index n = blocks[k].order;
        double f0n = blocks[k].constant.cwiseAbs().maxCoeff();
        double sp = std::max(10.0, 10.0 * f0n * static_cast<double>(n));
        S[k] = sp * RMat::Identity(n, n);
        Z[k] = std::max(1.0, c_scale) * RMat::Identity(n, n);
    }

    std::vector<RMat> Rp(K), Sinv(K), E(K), dS(K), dZ(K), dS_aff(K), dZ_aff(K);
    std::vector<Eigen::LLT<RMat>> llt(K);
    int consecutive_tiny_steps = 0;

    auto assemble = [&](int k, const RVec &xv) {
        RMat A = blocks[k].constant;
        for (const auto &[idx, F] : blocks[k].coeffs)
            A += xv(idx) * F;
        return A;
    };

    for (int iter = 0; iter <= opt.max_iters; ++iter)
    {
        // Residuals, objective values, and complementarity.
        double pres = 0.0;
        for (int k = 0; k < K; ++k)
        {
            Rp[k] = assemble(k, x) - S[k];
            pres = std::max(pres, Rp[k].cwiseAbs().maxCoeff() /
                                      (1.0 + blocks[k].constant.cwiseAbs().maxCoeff()));
        }
        RVec rd = c;
        double dobj = 0.0, comp = 0.0, znorm = 0.0;
        RVec atz = RVec::Zero(m); // homogeneous dual image sum_k <F_{k,i}, Z_k>
        for (int k = 0; k < K; ++k)
        {
            for (const auto &[idx, F] : blocks[k].coeffs)
                atz(idx) += inner(F, Z[k]);
            dobj -= inner(blocks[k].constant, Z[k]);
            comp += inner(S[k], Z[k]);
            znorm += Z[k].norm();
        }
        rd -= atz;
        const double mu = comp / total_dim;
        const double pobj = c.dot(x);
        const double dres = rd.cwiseAbs().maxCoeff() / c_scale;
        const double rel_gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

        res.stats.iterations = iter;
        res.stats.rel_gap = rel_gap;
        res.stats.primal_res = pres;
        res.stats.dual_res = dres;

        if (!std::isfinite(mu) || !std::isfinite(pobj) || !std::isfinite(dobj))
        {
            res.status = SolveStatus::numerical_failure;
            res.x = x;
            return res;
        }

        if (pres <= opt.feas_tol && dres <= opt.feas_tol && rel_gap <= opt.tol)
        {
            res.status = SolveStatus::optimal;
            res.x = x;
            res.pobj = pobj;
            res.dobj = dobj;
            return res;
        }

        // Primal infeasibility: a normalized dual ray with <F_i, Z> ~ 0 and <F0, Z> < 0.
        if (znorm > 1e5)
        {
            const double ray_align = atz.cwiseAbs().maxCoeff() / znorm;
            double f0z = 0.0;
            for (int k = 0; k < K; ++k)
                f0z += inner(blocks[k].constant, Z[k]);
            if (ray_align < 1e-9 && f0z / znorm < -1e-9)
            {
                res.status = SolveStatus::infeasible;
                res.x = x;
                return res;
            }
        }
        // Dual infeasibility: a normalized primal ray with c'x < 0 and sum x_i F_i ~ PSD.
        const double xnorm = x.norm();
        if (xnorm > 1e5 && c.dot(x) / xnorm < -1e-9)
        {
            double ray_min = 0.0;
            for (int k = 0; k < K; ++k)
            {
                RMat A = RMat::Zero(blocks[k].order, blocks[k].order);
                for (const auto &[idx, F] : blocks[k].coeffs)
                    A += (x(idx) / xnorm) * F;
                ray_min = std::min(ray_min, min_eig(A));
            }
            if (ray_min > -1e-9)
            {
                res.status = SolveStatus::unbounded;
                res.x = x;
                return res;
            }
        }

        if (iter == opt.max_iters)
            break;

        // Factorizations.
        bool fact_ok = true;
        for (int k = 0; k < K; ++k)
        {
            llt[k].compute(S[k]);
            if (llt[k].info() != Eigen::Success)
            {
                S[k] += 1e-12 * S[k].trace() / static_cast<double>(S[k].rows()) *
                        RMat::Identity(S[k].rows(), S[k].cols());
                llt[k].compute(S[k]);
                if (llt[k].info() != Eigen::Success)
                {
                    fact_ok = false;
                    break;
                }
            }
            Sinv[k] = llt[k].solve(RMat::Identity(S[k].rows(), S[k].cols()));
        }
        if (!fact_ok)
        {
            res.status = SolveStatus::numerical_failure;
            res.x = x;
            return res;
        }

        // Schur complement (shared by predictor and corrector).
        RMat Mschur = RMat::Zero(m, m);
        std::vector<std::vector<RMat>> T(K); // T[k][a] = Z_k F_{k,a} S_k^-1
        for (int k = 0; k < K; ++k)
        {
            const auto &cf = blocks[k].coeffs;
            T[k].resize(cf.size());
            for (std::size_t a = 0; a < cf.size(); ++a)
                T[k][a] = Z[k] * cf[a].second * Sinv[k];
            for (std::size_t a = 0; a < cf.size(); ++a)
                for (std::size_t b2 = a; b2 < cf.size(); ++b2)
                {
                    // Tr(F_j Z F_i S^-1), symmetric in (i, j).
                    const double v = inner(cf[b2].second, T[k][a]);
                    Mschur(cf[a].first, cf[b2].first) += v;
                    if (cf[a].first != cf[b2].first)
                        Mschur(cf[b2].first, cf[a].first) += v;
                }
        }
        Mschur = 0.5 * (Mschur + Mschur.transpose()).eval();
        Eigen::LLT<RMat> mllt(Mschur);
        if (mllt.info() != Eigen::Success)
        {
            const double ridge = std::max(1e-14 * Mschur.trace() / m, 1e-300);
            Mschur += ridge * RMat::Identity(m, m);
            mllt.compute(Mschur);
            if (mllt.info() != Eigen::Success)
            {
                res.status = SolveStatus::numerical_failure;
                res.x = x;
                return res;
            }
        }

        // One Newton solve for a given centering target; E_k carries the corrector term.
        // Substituting dZ = sigma*mu*S^-1 - Z - Z dS S^-1 - E S^-1 with dS = Rp + sum dx_j F_j
        // into the linearized dual feasibility sum_k <F_i, Z + dZ> = c_i gives the Schur rhs
        // below; the Z Rp S^-1 term couples the primal residual into the dual update.
        auto direction = [&](double sigma_mu, bool with_E, RVec &dx_out) {
            RVec rhs = -c;
            for (int k = 0; k < K; ++k)
            {
                RMat Gk = sigma_mu * Sinv[k] - Z[k] * Rp[k] * Sinv[k];
                if (with_E)
                    Gk -= E[k] * Sinv[k];
                for (const auto &[idx, F] : blocks[k].coeffs)
                    rhs(idx) += inner(F, Gk);
            }
            dx_out = mllt.solve(rhs);
            for (int k = 0; k < K; ++k)
            {
                dS[k] = Rp[k];
                for (const auto &[idx, F] : blocks[k].coeffs)
                    dS[k] += dx_out(idx) * F;
                RMat dZk = sigma_mu * Sinv[k] - Z[k] - Z[k] * dS[k] * Sinv[k];
                if (with_E)
                    dZk -= E[k] * Sinv[k];
                dZ[k] = 0.5 * (dZk + dZk.transpose()).eval();
            }
        };

        // Predictor (affine scaling).
        RVec dx_aff;
        direction(0.0, false, dx_aff);
        double ap_aff = 1.0, ad_aff = 1.0;
        for (int k = 0; k < K; ++k)
        {
            dS_aff[k] = dS[k];
            dZ_aff[k] = dZ[k];
            ap_aff = std::min(ap_aff, detail::max_psd_step(llt[k], dS[k], 1.0));
        }
        std::vector<Eigen::LLT<RMat>> zllt(K);
        for (int k = 0; k < K; ++k)
        {
            zllt[k].compute(Z[k]);
            if (zllt[k].info() == Eigen::Success)
                ad_aff = std::min(ad_aff, detail::max_psd_step(zllt[k], dZ[k], 1.0));
        }

        double mu_aff = 0.0;
        for (int k = 0; k < K; ++k)
            mu_aff += inner(S[k] + ap_aff * dS_aff[k], Z[k] + ad_aff * dZ_aff[k]);
        mu_aff = std::max(mu_aff / total_dim, 0.0);
        double sigma = std::pow(mu_aff / mu, 3.0);
        sigma = std::min(1.0, std::max(opt.sigma_min, sigma));

        // Corrector.
        for (int k = 0; k < K; ++k)
            E[k] = dZ_aff[k] * dS_aff[k];
        RVec dx;
        direction(sigma * mu, true, dx);

        double ap = 1.0, ad = 1.0;
        for (int k = 0; k < K; ++k)
        {
            ap = std::min(ap, detail::max_psd_step(llt[k], dS[k], 1.0 / opt.frac_boundary));
            if (zllt[k].info() == Eigen::Success)
                ad = std::min(ad, detail::max_psd_step(zllt[k], dZ[k], 1.0 / opt.frac_boundary));
        }
        ap = std::min(1.0, opt.frac_boundary * ap);
        ad = std::min(1.0, opt.frac_boundary * ad);

        x += ap * dx;
        for (int k = 0; k < K; ++k)
        {
            S[k] += ap * dS[k];
            S[k] = 0.5 * (S[k] + S[k].transpose()).eval();
            Z[k] += ad * dZ[k];
            Z[k] = 0.5 * (Z[k] + Z[k].transpose()).eval();
        }

        if (std::max(ap, ad) < 1e-8)
        {
            if (++consecutive_tiny_steps >= 2)
            {
                res.status = SolveStatus::numerical_failure;
                res.x = x;
                return res;
            }
        }
        else
            consecutive_tiny_steps = 0;
    }

    res.status = SolveStatus::numerical_failure; // iteration cap without convergence
    res.x = x;
    return res;
}

} // namespace ipm
} // namespace irsbeam
