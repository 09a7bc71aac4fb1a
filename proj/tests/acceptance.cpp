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
// End-to-end acceptance gate.  Eight independent checks, each printed as a single PASS/FAIL
// line; the process exits nonzero if any check fails.  Checks 1-3 validate the algebra and the
// worst-case oracles, 4 pins the solver against a brute-force scalar ground truth, 5-6 validate
// the iteration dynamics, 7 reproduces the qualitative parameter trends, and 8 certifies every
// solution produced along the way against the independent closed-form oracles.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <irsbeam/harness.hpp>
#include <irsbeam/maxrho.hpp>

using namespace irsbeam;

namespace
{

int g_failures = 0;
int g_certified = 0;
int g_oracle_violations = 0;

struct Timer
{
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void report(int index, const std::string &name, bool ok, const std::string &detail,
            double seconds)
{
    std::printf("criterion %d %-24s %s%s%s  [%.1fs]\n", index, name.c_str(),
                ok ? "PASS" : "FAIL", detail.empty() ? "" : " - ", detail.c_str(), seconds);
    std::fflush(stdout);
    if (!ok)
        ++g_failures;
}

CVec random_cvec(Rng &rng, Eigen::Index n)
{
    CVec v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v(i) = rng.cnormal();
    return v;
}

CMat random_cmat(Rng &rng, Eigen::Index r, Eigen::Index c)
{
    CMat A(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
        for (Eigen::Index i = 0; i < r; ++i)
            A(i, j) = rng.cnormal();
    return A;
}

CMat random_psd(Rng &rng, Eigen::Index n)
{
    CMat A = random_cmat(rng, n, n);
    return CMat(A * A.adjoint());
}

// Re-certify a feasible solution against the independent closed-form oracles on the
// original channels.  Feeds the suite-wide violation counter read by check 8.
void certify(const BeamformingSolution &sol, const ChannelSet &cs, const SystemParams &p)
{
    if (sol.status != MaxRhoStatus::ok)
        return;
    ++g_certified;
    const double wc_snr =
        worst_case_snr(cs.g, cs.Hf_bar, sol.theta, sol.rho, sol.w, cs.delta_f).value;
    if (wc_snr < p.gamma1 * (1.0 - 1e-9))
        ++g_oracle_violations;
    if (p.mu > 0.0)
    {
        const double wc_energy = p.eta * (1.0 - sol.rho * sol.rho) *
                                 worst_case_incident_power(cs.H_bar, sol.w, cs.delta_h).value;
        if (wc_energy < static_cast<double>(p.N) * p.mu * (1.0 - 1e-9))
            ++g_oracle_violations;
    }
}

// Largest achievable minimum eigenvalue of B0 + m * B1 over m >= 0 (concave in m).
double best_min_eig(const CMat &B0, const CMat &B1)
{
    auto f = [&](double m) { return min_eig(CMat(B0 + m * B1), 1e-7); };
    double lo = 0.0, hi = 1.0;
    while (f(hi * 2.0) > f(hi) && hi < 1e12)
        hi *= 2.0;
    hi *= 2.0;
    for (int it = 0; it < 200; ++it)
    {
        const double a = lo + (hi - lo) / 3.0, b = hi - (hi - lo) / 3.0;
        if (f(a) < f(b))
            lo = a;
        else
            hi = b;
    }
    return f(0.5 * (lo + hi));
}

// Exact robust minimum of the aligned SNR quadratic (trust-region form, see lmi.hpp).
double robust_snr_min(const CMat &W, const CVec &g, const CVec &theta, double kappa_m, double rho,
                      double delta_f)
{
    const double alpha = 1.0 + rho * kappa_m;
    CMat col = alpha * g;
    return worst_case_incident_power_psd(col, W, rho * delta_f * theta.norm()).value;
}

// ---------------------------------------------------------------------------------------------

bool check_identities(std::string &detail)
{
    Rng rng(20260817);
    double worst_alg = 0.0, worst_eig = 0.0;
    for (int inst = 0; inst < 1000; ++inst)
    {
        const Eigen::Index m = 2 + inst % 3, n = 2 + (inst / 3) % 3, p = 2 + (inst / 9) % 2;
        const CMat A = random_cmat(rng, m, n), B = random_cmat(rng, n, p),
                   C = random_cmat(rng, p, m);

        // vec(A B C) = (C^T kron A) vec(B)
        const CVec lhs = vec(CMat(A * B * C));
        const CVec rhs = kron(C.transpose(), A) * vec(B);
        worst_alg = std::max(worst_alg, (lhs - rhs).norm() / std::max(1.0, lhs.norm()));

        // Tr(A^H A') = vec(A)^H vec(A') for a second same-shaped matrix
        const CMat A2 = random_cmat(rng, m, n);
        const cxd tr = (A.adjoint() * A2).trace();
        const cxd ip = vec(A).dot(vec(A2));
        worst_alg = std::max(worst_alg, std::abs(tr - ip) / std::max(1.0, std::abs(tr)));

        // unvec inverts vec
        worst_alg = std::max(worst_alg, (unvec(vec(A), m, n) - A).norm());

        // realification preserves the minimum eigenvalue
        CMat S = random_cmat(rng, m, m);
        const CMat H = 0.5 * (S + S.adjoint());
        worst_eig = std::max(worst_eig, std::abs(min_eig(H) - min_eig(realify(H))));
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "max identity dev %.2e, max eig dev %.2e", worst_alg,
                  worst_eig);
    detail = buf;
    return worst_alg <= 1e-12 && worst_eig <= 1e-10;
}

bool check_s_lemma(std::string &detail)
{
    Rng rng(20260818);
    const Eigen::Index M = 2, N = 3;
    int mismatches = 0, decided = 0;

    for (int inst = 0; inst < 100; ++inst)
    {
        const CVec g = random_cvec(rng, M), theta = random_cvec(rng, N);
        const CMat H = random_cmat(rng, M, N);
        const CMat W = random_psd(rng, M);
        const double rho = rng.uniform(0.1, 0.9);
        const double kappa = rng.uniform(0.1, 1.5);
        const double delta_f = rng.uniform(0.05, 0.6);
        const double delta_h = rng.uniform(0.05, 0.8);
        const int mult_index = static_cast<int>(M * M);
        const RVec wx = hermitian_to_params(W);

        // SNR side: the LMI with some t >= 0 must be feasible exactly when the closed-form
        // robust minimum clears the target.
        const double q1 = robust_snr_min(W, g, theta, kappa, rho, delta_f);
        double gamma1 = 0.0;
        do
            gamma1 = q1 * std::exp(rng.uniform(-1.2, 1.2));
        while (gamma1 <= 0.0 || std::abs(q1 - gamma1) <= 1e-6 * std::max(1.0, q1));
        {
            LmiBlock blk = build_snr_lmi(g, theta, kappa, rho, delta_f, gamma1, mult_index);
            CMat B0 = blk.constant, B1 = CMat::Zero(blk.order, blk.order);
            for (const auto &[idx, F] : blk.coeffs)
            {
                if (idx == mult_index)
                    B1 = F;
                else
                    B0 += wx(idx) * F;
            }
            const bool lmi_ok =
                best_min_eig(B0, B1) >= -1e-9 * std::max(1.0, B0.cwiseAbs().maxCoeff());
            if (lmi_ok != (q1 >= gamma1))
                ++mismatches;
            ++decided;
        }

        // Energy side against the demand threshold N*mu/(eta*(1 - rho^2)).
        const double q0 = worst_case_incident_power_psd(H, W, delta_h).value;
        const double eta = 0.8;
        double mu = 0.0;
        double c = 0.0;
        do
        {
            mu = q0 * eta * (1.0 - rho * rho) / static_cast<double>(N) *
                 std::exp(rng.uniform(-1.2, 1.2));
            c = static_cast<double>(N) * mu / (eta * (1.0 - rho * rho));
        } while (c <= 0.0 || std::abs(q0 - c) <= 1e-6 * std::max(1.0, q0));
        {
            LmiBlock blk = build_energy_lmi(H, delta_h, c, mult_index);
            CMat B0 = blk.constant, B1 = CMat::Zero(blk.order, blk.order);
            for (const auto &[idx, F] : blk.coeffs)
            {
                if (idx == mult_index)
                    B1 = F;
                else
                    B0 += wx(idx) * F;
            }
            const bool lmi_ok =
                best_min_eig(B0, B1) >= -1e-9 * std::max(1.0, B0.cwiseAbs().maxCoeff());
            if (lmi_ok != (q0 >= c))
                ++mismatches;
            ++decided;
        }
    }
    detail = std::to_string(mismatches) + " mismatches over " + std::to_string(decided) +
             " decisions";
    return mismatches == 0 && decided == 200;
}

bool check_oracles(std::string &detail)
{
    Rng rng(20260819);
    const int samples = 10000;
    double worst_slack = 0.0, worst_attain = 0.0;

    for (int inst = 0; inst < 5; ++inst)
    {
        const Eigen::Index M = 2 + inst % 2, N = 2 + inst % 3;
        const CVec g = random_cvec(rng, M), w = random_cvec(rng, M), theta = random_cvec(rng, N);
        const CMat Hf = random_cmat(rng, M, N), H = random_cmat(rng, M, N);
        const double rho = rng.uniform(0.1, 0.9);
        const double delta_f = rng.uniform(0.1, 0.8), delta_h = rng.uniform(0.1, 0.8);

        const WorstCase ws = worst_case_snr(g, Hf, theta, rho, w, delta_f);
        const double attain_s = snr_at(g, Hf, theta, rho, w, ws.worst_delta);
        worst_attain = std::max(worst_attain,
                                std::abs(attain_s - ws.value) / std::max(1.0, ws.value));
        const WorstCase we = worst_case_incident_power(H, w, delta_h);
        const double attain_e = incident_power_at(H, w, we.worst_delta);
        worst_attain = std::max(worst_attain,
                                std::abs(attain_e - we.value) / std::max(1.0, we.value));

        for (int s = 0; s < samples; ++s)
        {
            const CMat df = sample_perturbation(rng, delta_f, M, N, true);
            worst_slack = std::min(worst_slack, snr_at(g, Hf, theta, rho, w, df) - ws.value);
            const CMat dh = sample_perturbation(rng, delta_h, M, N, true);
            worst_slack = std::min(worst_slack, incident_power_at(H, w, dh) - we.value);
        }
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "min slack %.2e, max attainment dev %.2e", worst_slack,
                  worst_attain);
    detail = buf;
    return worst_slack >= -1e-9 && worst_attain <= 1e-8;
}

bool check_scalar_ground_truth(std::string &detail)
{
    SystemParams p;
    p.M = 1;
    p.N = 1;
    p.beta = 0.0;
    double worst_rel = 0.0;
    int solved = 0;

    for (int trial = 0; trial < 20; ++trial)
    {
        ChannelSet cs = generate_channels(p, Topology{}, derive_seed(p.seed, {'G', (std::uint64_t)trial}));
        BeamformingSolution sol = max_rho_solve(cs, p);
        if (sol.status != MaxRhoStatus::ok)
            continue;
        certify(sol, cs, p);
        ++solved;

        // Dense grid over the power-splitting ratio; no uncertainty, so both constraints
        // have closed forms: amplitude (|g| + rho*|hf|) and harvested power eta*(1-rho^2)*|h|^2.
        const double ag = std::abs(cs.g(0));
        const double ahf = std::abs(cs.Hf_bar(0, 0));
        const double ah2 = std::norm(cs.H_bar(0, 0));
        double best = std::numeric_limits<double>::infinity();
        const int grid = 4000;
        for (int i = 0; i < grid; ++i)
        {
            const double rho = (static_cast<double>(i) / grid) * 0.99999;
            const double amp = ag + rho * ahf;
            const double p_snr = p.gamma1 / (amp * amp);
            const double p_energy =
                p.mu / (p.eta * (1.0 - rho * rho) * ah2); // N = 1
            best = std::min(best, std::max(p_snr, p_energy));
        }
        worst_rel = std::max(worst_rel, std::abs(sol.power - best) / best);
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%d/20 solved, max rel dev %.3e", solved, worst_rel);
    detail = buf;
    return solved == 20 && worst_rel <= 0.01;
}

bool check_convergence(std::string &detail, std::vector<BeamformingSolution> &sols,
                       std::vector<ChannelSet> &channels, SystemParams &params_out)
{
    SystemParams p; // defaults: M=2, N=20, gamma1 = 30 dB, mu = 20, beta = 0.1, epsilon = 1e-5
    params_out = p;
    int converged_fast = 0;
    bool monotone = true;

    for (int trial = 0; trial < 10; ++trial)
    {
        const std::uint64_t seed = derive_seed(p.seed, {'T', (std::uint64_t)trial});
        ChannelSet cs = generate_channels(p, Topology{}, seed);
        BeamformingSolution sol = max_rho_solve(cs, p);
        certify(sol, cs, p);
        if (sol.status == MaxRhoStatus::ok)
        {
            if (sol.converged && sol.iterations <= 40)
                ++converged_fast;
            for (std::size_t k = 1; k < sol.trace.size(); ++k)
                if (sol.trace[k].trace_w > sol.trace[k - 1].trace_w * (1.0 + 1e-6))
                    monotone = false;
            sols.push_back(sol);
            channels.push_back(cs);
        }
    }
    detail = std::to_string(converged_fast) + "/10 converged within 40 iterations, trace " +
             (monotone ? "monotone" : "NOT monotone");
    return converged_fast >= 9 && monotone;
}

bool check_energy_activity_all(std::string &detail,
                               const std::vector<BeamformingSolution> &sols,
                               const std::vector<ChannelSet> &channels,
                               const SystemParams &p)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < sols.size(); ++i)
        worst = std::max(worst, check_energy_activity(sols[i], channels[i], p));
    char buf[128];
    std::snprintf(buf, sizeof(buf), "max relative slack %.2e over %zu trials", worst,
                  sols.size());
    detail = buf;
    return !sols.empty() && worst <= 1e-4;
}

// Allow a single inversion of at most `tol` per curve (sampling noise allowance).
bool trend_ok(const std::vector<double> &vals, bool increasing, double tol)
{
    int inversions = 0;
    for (std::size_t i = 1; i < vals.size(); ++i)
    {
        const double step = increasing ? vals[i] - vals[i - 1] : vals[i - 1] - vals[i];
        if (step < 0.0)
        {
            if (-step > tol)
                return false;
            ++inversions;
        }
    }
    return inversions <= 1;
}

bool check_trends(std::string &detail)
{
    ExperimentConfig base;
    base.system.trials = 10; // defaults otherwise: M=2, 30 dB target, mu=20, beta=0.1

    const std::vector<double> n_values = {20, 40, 60, 80, 100};
    std::vector<SweepPoint> curve_lo = run_sweep(base, "N", n_values, base.system.trials);

    ExperimentConfig wide = base;
    wide.system.beta = 0.15;
    std::vector<SweepPoint> curve_hi = run_sweep(wide, "N", n_values, wide.system.trials);

    ExperimentConfig mid = base;
    mid.system.N = 50;
    std::vector<SweepPoint> curve_g =
        run_sweep(mid, "gamma1", {20, 25, 30, 35, 40}, mid.system.trials);

    int infeasible = 0;
    std::vector<double> p_lo, p_hi, r_lo, r_hi, p_g;
    for (const auto &pt : curve_lo)
    {
        infeasible += pt.infeasible_count;
        p_lo.push_back(pt.power_db_mean);
        r_lo.push_back(pt.rho_mean);
    }
    for (const auto &pt : curve_hi)
    {
        infeasible += pt.infeasible_count;
        p_hi.push_back(pt.power_db_mean);
        r_hi.push_back(pt.rho_mean);
    }
    for (const auto &pt : curve_g)
    {
        infeasible += pt.infeasible_count;
        p_g.push_back(pt.power_db_mean);
    }

    const bool a = trend_ok(p_lo, false, 0.2); // power non-increasing in N
    // More uncertainty costs power and lowers the achievable split at each N.
    std::vector<double> gap_p, gap_r;
    for (std::size_t i = 0; i < p_lo.size(); ++i)
    {
        gap_p.push_back(p_hi[i] - p_lo[i]);
        gap_r.push_back(r_lo[i] - r_hi[i]);
    }
    int bad_p = 0, bad_r = 0, soft_p = 0, soft_r = 0;
    for (double v : gap_p)
    {
        if (v < -0.2)
            ++bad_p;
        else if (v < 0.0)
            ++soft_p;
    }
    for (double v : gap_r)
    {
        if (v < -0.01)
            ++bad_r;
        else if (v < 0.0)
            ++soft_r;
    }
    const bool b = bad_p == 0 && soft_p <= 1 && bad_r == 0 && soft_r <= 1;
    const bool c = trend_ok(p_g, true, 0.2); // power increasing in the SNR target

    char buf[160];
    std::snprintf(buf, sizeof(buf), "N-trend %s, beta-gap %s, target-trend %s, %d infeasible",
                  a ? "ok" : "bad", b ? "ok" : "bad", c ? "ok" : "bad", infeasible);
    detail = buf;
    return a && b && c && infeasible == 0;
}

bool check_certifications(std::string &detail)
{
    // A few direct solves at the sweep extremes feed extra solutions through the oracles.
    for (int n : {20, 100})
        for (double beta : {0.1, 0.15})
        {
            SystemParams p;
            p.N = n;
            p.beta = beta;
            ChannelSet cs = generate_channels(p, Topology{}, derive_seed(p.seed, {'C', (std::uint64_t)n}));
            BeamformingSolution sol = max_rho_solve(cs, p);
            certify(sol, cs, p);
        }
    detail = std::to_string(g_oracle_violations) + " violations over " +
             std::to_string(g_certified) + " certified solutions";
    return g_certified > 0 && g_oracle_violations == 0;
}

} // namespace

int main()
{
    std::printf("acceptance suite\n");
    bool all = true;
    std::string detail;

    {
        Timer t;
        const bool ok = check_identities(detail);
        report(1, "identities", ok, detail, t.seconds());
        all = all && ok;
    }
    {
        Timer t;
        const bool ok = check_s_lemma(detail);
        report(2, "s-procedure exactness", ok, detail, t.seconds());
        all = all && ok;
    }
    {
        Timer t;
        const bool ok = check_oracles(detail);
        report(3, "worst-case oracles", ok, detail, t.seconds());
        all = all && ok;
    }
    {
        Timer t;
        const bool ok = check_scalar_ground_truth(detail);
        report(4, "scalar ground truth", ok, detail, t.seconds());
        all = all && ok;
    }

    std::vector<BeamformingSolution> sols;
    std::vector<ChannelSet> channels;
    SystemParams conv_params;
    {
        Timer t;
        const bool ok = check_convergence(detail, sols, channels, conv_params);
        report(5, "convergence", ok, detail, t.seconds());
        all = all && ok;
    }
    {
        Timer t;
        const bool ok = check_energy_activity_all(detail, sols, channels, conv_params);
        report(6, "energy activity", ok, detail, t.seconds());
        all = all && ok;
    }
    {
        Timer t;
        const bool ok = check_trends(detail);
        report(7, "parameter trends", ok, detail, t.seconds());
        all = all && ok;
    }
    {
        Timer t;
        const bool ok = check_certifications(detail);
        report(8, "feasibility soundness", ok, detail, t.seconds());
        all = all && ok;
    }

    std::printf("%s\n", all ? "all criteria passed" : "ACCEPTANCE FAILED");
    return all ? 0 : 1;
}
