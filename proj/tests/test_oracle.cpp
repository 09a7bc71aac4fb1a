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

#include <catch2/catch_amalgamated.hpp>

#include <irsbeam/channel.hpp>
#include <irsbeam/oracle.hpp>

using namespace irsbeam;
using Catch::Approx;

namespace
{

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

double incident_power_psd_at(const CMat &H_bar, const CMat &W, const CMat &delta)
{
    const CMat Hp = H_bar + delta;
    return (Hp.adjoint() * W * Hp).trace().real();
}

} // namespace

TEST_CASE("worst-case SNR matches a hand-computed scalar example", "[oracle]")
{
    // g = 2, no reflected path, theta = 1, w = 1, rho = 0.5, delta_f = 1:
    // nominal amplitude 2, reach 0.5 * 1 * 1 * 1 = 0.5, worst value (2 - 0.5)^2.
    CVec g(1), theta(1), w(1);
    g << cxd(2, 0);
    theta << cxd(1, 0);
    w << cxd(1, 0);
    CMat Hf = CMat::Zero(1, 1);
    WorstCase wc = worst_case_snr(g, Hf, theta, 0.5, w, 1.0);
    CHECK(wc.value == Approx(2.25).margin(1e-14));
    CHECK_FALSE(wc.clipped);
    CHECK(wc.worst_delta.norm() == Approx(1.0).margin(1e-14));
    CHECK(snr_at(g, Hf, theta, 0.5, w, wc.worst_delta) == Approx(2.25).margin(1e-12));
}

TEST_CASE("no sampled perturbation beats the worst-case SNR", "[oracle]")
{
    Rng rng(101);
    for (int inst = 0; inst < 20; ++inst)
    {
        const Eigen::Index M = 2 + inst % 3, N = 1 + inst % 4;
        CVec g = random_cvec(rng, M), w = random_cvec(rng, M), theta = random_cvec(rng, N);
        CMat Hf = random_cmat(rng, M, N);
        const double rho = rng.uniform(0.05, 0.95);
        const double delta_f = rng.uniform(0.0, 1.0);
        WorstCase wc = worst_case_snr(g, Hf, theta, rho, w, delta_f);

        // The attaining perturbation is admissible and meets the reported value.
        REQUIRE(wc.worst_delta.norm() <= delta_f + 1e-12);
        CHECK(snr_at(g, Hf, theta, rho, w, wc.worst_delta) ==
              Approx(wc.value).margin(1e-8 * std::max(1.0, wc.value)));
        if (!wc.clipped && delta_f > 0.0)
            CHECK(wc.worst_delta.norm() == Approx(delta_f).margin(1e-12));

        for (int s = 0; s < 300; ++s)
        {
            CMat d = sample_perturbation(rng, delta_f, M, N, s % 2 == 0);
            REQUIRE(snr_at(g, Hf, theta, rho, w, d) >= wc.value - 1e-9);
        }
    }
}

TEST_CASE("worst-case SNR clips to zero under a large uncertainty ball", "[oracle]")
{
    Rng rng(7);
    CVec g = random_cvec(rng, 2), w = random_cvec(rng, 2), theta = random_cvec(rng, 3);
    CMat Hf = random_cmat(rng, 2, 3);
    WorstCase wc = worst_case_snr(g, Hf, theta, 0.9, w, 1e4);
    CHECK(wc.clipped);
    CHECK(wc.value == 0.0);
    CHECK(snr_at(g, Hf, theta, 0.9, w, wc.worst_delta) == Approx(0.0).margin(1e-16));
    REQUIRE(wc.worst_delta.norm() <= 1e4);
}

TEST_CASE("worst-case SNR edge cases", "[oracle]")
{
    Rng rng(13);
    CVec g = random_cvec(rng, 2), w = random_cvec(rng, 2), theta = random_cvec(rng, 3);
    CMat Hf = random_cmat(rng, 2, 3);

    const cxd u0 = (g + 0.4 * (Hf * theta)).dot(w);

    // No uncertainty: the nominal value is the worst case.
    CHECK(worst_case_snr(g, Hf, theta, 0.4, w, 0.0).value == Approx(std::norm(u0)));
    // No reflected power: rho multiplies away the perturbation entirely.
    CHECK(worst_case_snr(g, Hf, theta, 0.0, w, 2.0).value ==
          Approx(std::norm(g.dot(w))).margin(1e-12));
    // Zero beamformer receives nothing.
    CHECK(worst_case_snr(g, Hf, theta, 0.4, CVec::Zero(2), 1.0).value == 0.0);
    // Zero reflection vector makes the perturbation direction undefined but harmless.
    WorstCase wc = worst_case_snr(g, Hf, CVec::Zero(3), 0.4, w, 1.0);
    CHECK(wc.degenerate);
    CHECK(wc.value == Approx(std::norm(g.dot(w))).margin(1e-12));
}

TEST_CASE("worst-case incident power matches sampling and attains its bound", "[oracle]")
{
    Rng rng(211);
    for (int inst = 0; inst < 20; ++inst)
    {
        const Eigen::Index M = 2 + inst % 3, N = 1 + inst % 5;
        CVec w = random_cvec(rng, M);
        CMat H = random_cmat(rng, M, N);
        const double delta_h = rng.uniform(0.0, 2.0);
        WorstCase wc = worst_case_incident_power(H, w, delta_h);

        REQUIRE(wc.worst_delta.norm() <= delta_h + 1e-12);
        CHECK(incident_power_at(H, w, wc.worst_delta) ==
              Approx(wc.value).margin(1e-8 * std::max(1.0, wc.value)));
        if (!wc.clipped && delta_h > 0.0)
            CHECK(wc.worst_delta.norm() == Approx(delta_h).margin(1e-12));

        for (int s = 0; s < 300; ++s)
        {
            CMat d = sample_perturbation(rng, delta_h, M, N, s % 2 == 0);
            REQUIRE(incident_power_at(H, w, d) >= wc.value - 1e-9);
        }
    }
}

TEST_CASE("incident-power oracle clips when the ball covers the nominal response", "[oracle]")
{
    CMat H(1, 1);
    H << cxd(1, 0);
    CVec w(1);
    w << cxd(1, 0);
    WorstCase wc = worst_case_incident_power(H, w, 5.0);
    CHECK(wc.clipped);
    CHECK(wc.value == 0.0);
    CHECK(incident_power_at(H, w, wc.worst_delta) == Approx(0.0).margin(1e-20));

    WorstCase tight = worst_case_incident_power(H, w, 0.25);
    CHECK(tight.value == Approx(0.5625)); // (1 - 0.25)^2
}

TEST_CASE("PSD incident-power oracle agrees with the rank-one form", "[oracle]")
{
    Rng rng(307);
    for (int inst = 0; inst < 10; ++inst)
    {
        const Eigen::Index M = 2 + inst % 3, N = 2 + inst % 4;
        CVec w = random_cvec(rng, M);
        CMat H = random_cmat(rng, M, N);
        const double delta_h = rng.uniform(0.05, 1.5);
        CMat W = w * w.adjoint();
        WorstCase a = worst_case_incident_power(H, w, delta_h);
        WorstCase b = worst_case_incident_power_psd(H, W, delta_h);
        CHECK(b.value == Approx(a.value).margin(1e-8 * std::max(1.0, a.value)));
        CHECK(incident_power_psd_at(H, W, b.worst_delta) ==
              Approx(b.value).margin(1e-7 * std::max(1.0, b.value)));
    }
}

TEST_CASE("PSD incident-power oracle is a true lower bound over the ball", "[oracle]")
{
    Rng rng(313);
    for (int inst = 0; inst < 10; ++inst)
    {
        const Eigen::Index M = 3, N = 4;
        CMat A = random_cmat(rng, M, M);
        CMat W = A * A.adjoint(); // PSD, generically full rank
        CMat H = random_cmat(rng, M, N);
        const double delta_h = rng.uniform(0.05, 1.0);
        WorstCase wc = worst_case_incident_power_psd(H, W, delta_h);

        REQUIRE(wc.worst_delta.norm() <= delta_h + 1e-9);
        CHECK(incident_power_psd_at(H, W, wc.worst_delta) ==
              Approx(wc.value).margin(1e-6 * std::max(1.0, wc.value)));
        for (int s = 0; s < 300; ++s)
        {
            CMat d = sample_perturbation(rng, delta_h, M, N, s % 2 == 0);
            REQUIRE(incident_power_psd_at(H, W, d) >= wc.value - 1e-9);
        }
    }
}

TEST_CASE("rho interval matches a brute-force scan on aligned instances", "[oracle]")
{
    Rng rng(401);
    for (int inst = 0; inst < 5; ++inst)
    {
        SystemParams p;
        p.M = 2;
        p.N = 3;
        p.gamma1 = db_to_linear(rng.uniform(5.0, 15.0));
        p.mu = 1.0;
        p.eta = 0.8;
        ChannelSet cs = generate_channels(p, Topology{}, 500 + inst);

        // Build an exactly aligned cascaded channel: Hf * theta = kappa * g.
        CVec theta(p.N);
        for (int n = 0; n < p.N; ++n)
            theta(n) = std::exp(cxd(0.0, rng.uniform(0.0, 2.0 * M_PI)));
        const double kappa = rng.uniform(0.5, 2.0);
        cs.Hf_bar = kappa * cs.g * theta.adjoint() / theta.squaredNorm();
        cs.delta_f = 0.1 * cs.Hf_bar.norm();
        cs.delta_h = 0.1 * cs.H_bar.norm();

        // Beamformer along the direct channel, sized so the SNR target binds strictly
        // inside (0, 1): the nominal amplitude covers 90% of the target at rho = 0.
        CVec w = (0.9 * std::sqrt(p.gamma1) / cs.g.squaredNorm()) * cs.g;
        RhoBounds rb = rho_bounds(cs, theta, kappa, w, p);

        auto snr_ok = [&](double rho) {
            return worst_case_snr(cs.g, cs.Hf_bar, theta, rho, w, cs.delta_f).value >= p.gamma1;
        };
        auto energy_ok = [&](double rho) {
            const double wc = worst_case_incident_power(cs.H_bar, w, cs.delta_h).value;
            return p.eta * (1.0 - rho * rho) * wc >=
                   static_cast<double>(p.N) * p.mu - 1e-12;
        };
        for (double rho = 0.0; rho <= 1.0; rho += 0.01)
        {
            const bool expect_snr = rb.snr_feasible && rho >= rb.rho_min - 1e-9;
            const bool expect_energy = rb.energy_feasible && rho <= rb.rho_max + 1e-9;
            INFO("instance " << inst << " rho " << rho);
            CHECK(snr_ok(rho) == expect_snr);
            CHECK(energy_ok(rho) == expect_energy);
        }
    }
}

TEST_CASE("rho interval flags impossible targets", "[oracle]")
{
    SystemParams p;
    p.M = 1;
    p.N = 1;
    p.gamma1 = 1e12; // unattainably high
    p.mu = 1e12;     // unattainably demanding
    ChannelSet cs = generate_channels(p, Topology{}, 11);
    CVec theta = CVec::Ones(1);
    CVec w = CVec::Ones(1);
    RhoBounds rb = rho_bounds(cs, theta, 0.5, w, p);
    CHECK_FALSE(rb.snr_feasible);
    CHECK_FALSE(rb.energy_feasible);
    CHECK(rb.rho_max == 0.0);
}
