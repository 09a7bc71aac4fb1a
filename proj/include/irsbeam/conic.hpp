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
// Conic problem container and solve layer.  Complex Hermitian affine blocks are mapped onto
// real symmetric blocks via realify() (PSD is preserved, every eigenvalue doubles); the
// interior-point backend only ever sees real data.  Solutions are independently verified:
// every block must be PSD under cx_core's min_eig, not just reported optimal by the solver.

#pragma once

#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "cxmat.hpp"
#include "ipm.hpp"
#include "params.hpp"

namespace irsbeam
{

// Complex Hermitian affine block: constant + sum_i x_i * coeff_i must be PSD.  Every matrix is
// Hermitian; variables are identified by their index in the problem's variable vector.
struct LmiBlock
{
    Eigen::Index order = 0;
    CMat constant;
    std::vector<std::pair<int, CMat>> coeffs;
};

// Where the named quantities live inside the flat variable vector x.
struct VariableLayout
{
    int M = 0;          // W occupies the first M^2 entries (hermitian_from_params layout)
    int idx_t = -1;     // SNR S-procedure multiplier
    int idx_tau = -1;   // energy S-procedure multiplier
    int idx_sigma = -1; // first energy slack scalar (reduced form only)
    int n_sigma = 0;
    int num_vars = 0;
};

struct ConicProblem
{
    RVec objective;
    std::vector<RealBlock> blocks;
    VariableLayout layout;

    // Realify a complex Hermitian block and append it.
    void add_hermitian_block(const LmiBlock &blk)
    {
        RealBlock rb;
        rb.order = 2 * blk.order;
        rb.constant = realify(blk.constant, 1e-9);
        rb.coeffs.reserve(blk.coeffs.size());
        for (const auto &[idx, F] : blk.coeffs)
            rb.coeffs.emplace_back(idx, realify(F, 1e-9));
        blocks.push_back(std::move(rb));
    }

    void add_real_block(RealBlock rb)
    {
        blocks.push_back(std::move(rb));
    }

    // Scalar inequality constant + sum coeff_i x_i >= 0 as an order-1 block.
    void add_scalar_row(double constant, const std::vector<std::pair<int, double>> &terms)
    {
        RealBlock rb;
        rb.order = 1;
        rb.constant = RMat::Constant(1, 1, constant);
        for (const auto &[idx, v] : terms)
            rb.coeffs.emplace_back(idx, RMat::Constant(1, 1, v));
        blocks.push_back(std::move(rb));
    }
};

struct ConicResult
{
    SolveStatus status = SolveStatus::numerical_failure;
    RVec x;
    CMat W; // extracted when layout.M > 0
    double t = std::numeric_limits<double>::quiet_NaN();
    double tau = std::numeric_limits<double>::quiet_NaN();
    double objective = std::numeric_limits<double>::quiet_NaN();
    SolverStats stats;
};

// Solve and verify.  A solution only keeps the `optimal` status if every constraint block is
// PSD within 1e-6 and the extracted W is PSD within 1e-7 (both relative to the block scale).
inline ConicResult solve(const ConicProblem &prob, const SolverOptions &sopt = {})
{
    sopt.validate();
    ipm::Options iopt;
    iopt.tol = sopt.tol;
    iopt.feas_tol = sopt.tol;
    iopt.max_iters = sopt.max_iters;

    ipm::Result r = ipm::solve(prob.objective, prob.blocks, iopt);

    ConicResult out;
    out.status = r.status;
    out.x = r.x;
    out.objective = r.pobj;
    out.stats = r.stats;
    if (prob.layout.idx_t >= 0 && r.x.size() > prob.layout.idx_t)
        out.t = r.x(prob.layout.idx_t);
    if (prob.layout.idx_tau >= 0 && r.x.size() > prob.layout.idx_tau)
        out.tau = r.x(prob.layout.idx_tau);
    if (prob.layout.M > 0 && r.x.size() >= prob.layout.M * prob.layout.M)
        out.W = hermitian_from_params(r.x.head(prob.layout.M * prob.layout.M), prob.layout.M);

    if (out.status == SolveStatus::optimal)
    {
        for (const auto &b : prob.blocks)
        {
            RMat A = b.constant;
            for (const auto &[idx, F] : b.coeffs)
                A += r.x(idx) * F;
            const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
            if (min_eig(A, 1e-7) < -1e-6 * scale)
            {
                out.status = SolveStatus::numerical_failure;
                return out;
            }
        }
        if (out.W.size() > 0)
        {
            const double wscale = std::max(1.0, out.W.cwiseAbs().maxCoeff());
            if (min_eig(out.W, 1e-7) < -1e-7 * wscale)
                out.status = SolveStatus::numerical_failure;
        }
    }
    return out;
}

// Serialize in SDPA sparse format (.dat-s):  minimize c'x  s.t.  sum_i x_i F_i - F0  PSD.
// Our constant term sits on the other side, so F0^(sdpa) = -constant.  Only upper-triangle
// entries are listed; blocks keep their order of appearance.
inline std::string export_sdpa(const ConicProblem &prob)
{
    const int m = static_cast<int>(prob.objective.size());
    std::string s;
    char buf[128];
    auto emit = [&](const char *fmt, auto... args) {
        std::snprintf(buf, sizeof(buf), fmt, args...);
        s += buf;
    };

    emit("%d\n", m);
    emit("%d\n", static_cast<int>(prob.blocks.size()));
    for (std::size_t k = 0; k < prob.blocks.size(); ++k)
        emit("%s%d", k ? " " : "", static_cast<int>(prob.blocks[k].order));
    s += "\n";
    for (int i = 0; i < m; ++i)
        emit("%s%.17g", i ? " " : "", prob.objective(i));
    s += "\n";

    auto emit_matrix = [&](int matno, int blkno, const RMat &A, double sign) {
        for (Eigen::Index i = 0; i < A.rows(); ++i)
            for (Eigen::Index j = i; j < A.cols(); ++j)
                if (A(i, j) != 0.0)
                    emit("%d %d %d %d %.17g\n", matno, blkno, static_cast<int>(i + 1),
                         static_cast<int>(j + 1), sign * A(i, j));
    };

    for (std::size_t k = 0; k < prob.blocks.size(); ++k)
    {
        emit_matrix(0, static_cast<int>(k + 1), prob.blocks[k].constant, -1.0);
        for (const auto &[idx, F] : prob.blocks[k].coeffs)
            emit_matrix(idx + 1, static_cast<int>(k + 1), F, 1.0);
    }
    return s;
}

} // namespace irsbeam
