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
// Closed-form worst-case evaluation over Frobenius-norm balls.  These are the independent
// certificates for the conic reformulations: every solution the optimizer returns must survive
// them, and they also drive the power-splitting bounds.
//
// Key reduction for the SNR side: the cascaded perturbation only enters through d = Delta *
// theta, and as Delta ranges over the ball ||Delta||_F <= delta, the vector d ranges exactly
// over the ball ||d||_2 <= delta * ||theta||_2 (take Delta = d * theta^H / ||theta||^2 to reach
// any admissible d).  Worst cases are therefore norm alignments in a single vector variable.

#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "channel.hpp"
#include "cxmat.hpp"
#include "params.hpp"

namespace irsbeam
{

// Worst-case report: the extremal constraint value over the uncertainty ball, and a
// perturbation attaining it.  `clipped` marks the regime where the uncertainty is large enough
// to drive the constraint all the way to zero (the attaining perturbation is then interior).
struct WorstCase
{
    double value = 0.0;
    CMat worst_delta;
    bool clipped = false;
    bool degenerate = false;
};

// Received SNR (noise-normalized) for an explicit cascaded perturbation.
inline double snr_at(const CVec &g, const CMat &Hf, const CVec &theta, double rho, const CVec &w,
                     const CMat &delta)
{
    cxd y = (g + rho * ((Hf + delta) * theta)).adjoint() * w;
    return std::norm(y);
}

// Incident power ||H^H w||^2 for an explicit AP->IRS perturbation.
inline double incident_power_at(const CMat &H_bar, const CVec &w, const CMat &delta)
{
    return ((H_bar + delta).adjoint() * w).squaredNorm();
}

// Minimum of |(g + rho*(Hf_bar + Delta)*theta)^H w|^2 over ||Delta||_F <= delta_f.
//
//   u    = (g + rho * Hf_bar * theta)^H w        (nominal received amplitude)
//   min  = max(|u| - rho * delta_f * ||theta|| * ||w||, 0)^2
//
// and the minimizer is rank-one, Delta = c * w * theta^H, phase-aligned against u.
inline WorstCase worst_case_snr(const CVec &g, const CMat &Hf_bar, const CVec &theta, double rho,
                                const CVec &w, double delta_f)
{
    if (g.size() != w.size() || Hf_bar.rows() != g.size() || Hf_bar.cols() != theta.size())
        throw std::invalid_argument("worst_case_snr: dimension mismatch");
    if (rho < 0.0 || rho > 1.0)
        throw std::invalid_argument("worst_case_snr: rho must lie in [0, 1]");
    if (delta_f < 0.0)
        throw std::invalid_argument("worst_case_snr: delta_f must be >= 0");

    WorstCase wc;
    wc.worst_delta = CMat::Zero(Hf_bar.rows(), Hf_bar.cols());

    const cxd u = (g + rho * (Hf_bar * theta)).dot(w); // Eigen dot conjugates the left argument
    const double au = std::abs(u);
    const double tn = theta.norm();
    const double wn = w.norm();
    wc.degenerate = (tn == 0.0 && rho > 0.0 && delta_f > 0.0);

    const double reach = rho * delta_f * tn * wn; // largest phase-aligned shift of u
    if (reach == 0.0)
    {
        wc.value = au * au; // perturbation cannot move the constraint
        return wc;
    }

    if (au > reach)
    {
        // Boundary worst case: push |u| down by the full reach.
        const cxd phase = u / au;
        const cxd c = -std::conj(phase) * delta_f / (tn * wn);
        wc.worst_delta = c * w * theta.adjoint();
        const double base = au - reach;
        wc.value = base * base;
    }
    else
    {
        // The ball is large enough to null the received amplitude entirely.
        wc.clipped = true;
        wc.value = 0.0;
        if (au > 0.0)
        {
            const cxd c = -std::conj(u) / (rho * tn * tn * wn * wn);
            wc.worst_delta = c * w * theta.adjoint();
        }
    }
    return wc;
}

// Minimum of ||(H_bar + Delta)^H w||^2 over ||Delta||_F <= delta_h.
//
//   min = max(||H_bar^H w|| - delta_h * ||w||, 0)^2
//
// attained by a rank-one Delta aligned with w on the left and with H_bar^H w on the right.
inline WorstCase worst_case_incident_power(const CMat &H_bar, const CVec &w, double delta_h)
{
    if (H_bar.rows() != w.size())
        throw std::invalid_argument("worst_case_incident_power: dimension mismatch");
    if (delta_h < 0.0)
        throw std::invalid_argument("worst_case_incident_power: delta_h must be >= 0");

    WorstCase wc;
    wc.worst_delta = CMat::Zero(H_bar.rows(), H_bar.cols());

    const CVec r = H_bar.adjoint() * w;
    const double rn = r.norm();
    const double wn = w.norm();
    const double reach = delta_h * wn;

    if (reach == 0.0 || wn == 0.0)
    {
        wc.value = rn * rn;
        return wc;
    }

    if (rn > reach)
    {
        const CVec q = r / rn;
        wc.worst_delta = -(delta_h / wn) * w * q.adjoint();
        const double base = rn - reach;
        wc.value = base * base;
    }
    else
    {
        // Ball radius exceeds what is needed to cancel H_bar^H w exactly.
        wc.clipped = true;
        wc.value = 0.0;
        if (rn > 0.0)
            wc.worst_delta = -(1.0 / (wn * wn)) * w * r.adjoint();
    }
    return wc;
}

// Minimum of Tr((H_bar + Delta)^H W (H_bar + Delta)) over ||Delta||_F <= delta_h for PSD W.
//
// In the eigenbasis W = V diag(lambda) V^H with coordinates C = V^H H_bar the problem separates,
// and the minimizer is C shrunk mode-wise by lambda_i/(lambda_i + nu) with a single multiplier
// nu >= 0 fixed by the trust-region budget (secular equation, solved by bisection).  For
// W = w w^H this reduces to the rank-one closed form above.
inline WorstCase worst_case_incident_power_psd(const CMat &H_bar, const CMat &W, double delta_h)
{
    if (H_bar.rows() != W.rows())
        throw std::invalid_argument("worst_case_incident_power_psd: dimension mismatch");
    if (delta_h < 0.0)
        throw std::invalid_argument("worst_case_incident_power_psd: delta_h must be >= 0");

    WorstCase wc;
    wc.worst_delta = CMat::Zero(H_bar.rows(), H_bar.cols());

    const CMat Ws = require_hermitian(W, 1e-9);
    Eigen::SelfAdjointEigenSolver<CMat> es(Ws);
    RVec lam = es.eigenvalues();
    const CMat &V = es.eigenvectors();
    const double lam_max = lam.maxCoeff();
    if (lam_max <= 0.0)
    {
        wc.value = 0.0; // W = 0: nothing to harvest, nothing to perturb
        return wc;
    }
    // Clamp solver-level negative dust so zero modes are treated as zero.
    const double lam_floor = 1e-14 * lam_max;
    for (Eigen::Index i = 0; i < lam.size(); ++i)
        if (lam(i) < lam_floor)
            lam(i) = 0.0;

    const CMat C = V.adjoint() * H_bar;
    const RMat C2 = C.cwiseAbs2();

    if (delta_h == 0.0)
    {
        wc.value = (lam.asDiagonal() * C2).sum();
        return wc;
    }

    // Budget needed to null every channel component W can see.
    double budget = 0.0;
    for (Eigen::Index i = 0; i < lam.size(); ++i)
        if (lam(i) > 0.0)
            budget += C2.row(i).sum();

    auto shrink_norm2 = [&](double nu) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < lam.size(); ++i)
            if (lam(i) > 0.0)
            {
                double t = lam(i) / (lam(i) + nu);
                s += t * t * C2.row(i).sum();
            }
        return s;
    };

    double nu = 0.0;
    if (budget <= delta_h * delta_h)
    {
        wc.clipped = true; // interior minimizer cancels the visible channel entirely
    }
    else
    {
        // Solve shrink_norm2(nu) = delta_h^2; the left side decreases from `budget` to zero.
        double lo = 0.0;
        double hi = lam_max * std::max(1.0, std::sqrt(budget) / delta_h);
        while (shrink_norm2(hi) > delta_h * delta_h)
            hi *= 2.0;
        for (int it = 0; it < 200; ++it)
        {
            double mid = 0.5 * (lo + hi);
            if (shrink_norm2(mid) > delta_h * delta_h)
                lo = mid;
            else
                hi = mid;
            if (hi - lo <= 1e-15 * std::max(1.0, hi))
                break;
        }
        nu = 0.5 * (lo + hi);
    }

    CMat Z = CMat::Zero(C.rows(), C.cols());
    double value = 0.0;
    for (Eigen::Index i = 0; i < lam.size(); ++i)
    {
        if (lam(i) <= 0.0)
            continue;
        const double t = lam(i) / (lam(i) + nu);
        Z.row(i) = -t * C.row(i);
        if (!wc.clipped)
        {
            const double s = nu / (lam(i) + nu);
            value += lam(i) * s * s * C2.row(i).sum();
        }
    }
    wc.worst_delta = V * Z;
    wc.value = value;
    return wc;
}

// Feasible range of the power-splitting ratio rho for a fixed beamformer.
struct RhoBounds
{
    double rho_min = 0.0;        // smallest rho meeting the worst-case SNR target
    double rho_max = 0.0;        // largest rho meeting the worst-case energy budget
    bool snr_feasible = true;    // false when no rho in [0, 1] meets the SNR target
    bool energy_feasible = true; // false when the energy budget fails even at rho = 0
};

// Closed-form rho interval for a fixed w, assuming the phases are aligned so that
// Hf_bar * theta = kappa_m * g.  The worst-case SNR grows affinely in rho while the worst-case
// harvested energy shrinks as (1 - rho^2); each bound comes from its own constraint boundary.
inline RhoBounds rho_bounds(const ChannelSet &cs, const CVec &theta, double kappa_m, const CVec &w,
                            const SystemParams &params)
{
    if (w.size() != cs.g.size())
        throw std::invalid_argument("rho_bounds: dimension mismatch");
    if (kappa_m < 0.0)
        throw std::invalid_argument("rho_bounds: kappa_m must be >= 0");

    RhoBounds rb;
    const double a = std::abs(cs.g.dot(w)); // |g^H w|
    const double slope = kappa_m * a - cs.delta_f * theta.norm() * w.norm();
    const double num = std::sqrt(params.gamma1) - a;

    if (num <= 0.0)
        rb.rho_min = 0.0; // target already met at rho = 0
    else if (slope <= 0.0)
    {
        rb.rho_min = std::numeric_limits<double>::infinity();
        rb.snr_feasible = false; // increasing rho cannot close the gap
    }
    else
    {
        rb.rho_min = num / slope;
        if (rb.rho_min > 1.0)
            rb.snr_feasible = false;
    }

    if (params.mu == 0.0)
    {
        rb.rho_max = 1.0; // no energy demand: all power to the information signal
        return rb;
    }
    const double wc_inc = worst_case_incident_power(cs.H_bar, w, cs.delta_h).value;
    const double need = static_cast<double>(params.N) * params.mu / params.eta;
    if (wc_inc <= need)
    {
        rb.rho_max = 0.0;
        rb.energy_feasible = false; // budget fails even with every watt harvested
        return rb;
    }
    rb.rho_max = std::sqrt(1.0 - need / wc_inc);
    return rb;
}

} // namespace irsbeam
