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
#include <complex>
#include <cstdint>
#include <random>

namespace irsbeam
{

// SplitMix64 mixing step.  Used for seed derivation so that substreams (one per matrix column,
// one per trial, ...) are decorrelated and stable across platforms and versions.
inline std::uint64_t splitmix64(std::uint64_t &state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derive a child seed from a base seed and a sequence of tags.  Chaining SplitMix64 over the
// inputs keeps the derivation order-sensitive: derive_seed(s, {a, b}) != derive_seed(s, {b, a}).
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags)
{
    std::uint64_t state = base;
    std::uint64_t out = splitmix64(state);
    for (std::uint64_t t : tags)
    {
        state = out ^ (t + 0x9e3779b97f4a7c15ULL);
        out = splitmix64(state);
    }
    return out;
}

// Deterministic random stream.  std::mt19937_64 is fully specified by the standard, and the
// distributions below are hand-rolled (uniform from raw 64-bit output, normal via Box-Muller)
// because the std::*_distribution transforms are implementation-defined and would break
// bit-reproducibility across toolchains.
class Rng
{
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform double in [0, 1) with 53 random bits.
    double uniform()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform double in [lo, hi).
    double uniform(double lo, double hi)
    {
        return lo + (hi - lo) * uniform();
    }

    // Standard real normal N(0, 1) via Box-Muller (cached second deviate).
    double normal()
    {
        if (have_spare_)
        {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0)
            u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Circularly-symmetric complex normal CN(0, 1), i.e. E|z|^2 = 1.
    std::complex<double> cnormal()
    {
        const double s = std::sqrt(0.5);
        double re = s * normal();
        double im = s * normal();
        return {re, im};
    }

    std::uint64_t raw()
    {
        return engine_();
    }

  private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace irsbeam
