// SPDX-License-Identifier: Apache-2.0
//
// otfs-isac-lab: link-level NOMA-assisted OTFS-ISAC simulation
// Copyright (C) 2026 The otfs-isac-lab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace otfs_isac {

using cplx = std::complex<double>;

/// Deterministic generator used everywhere a trial draws random numbers.
using Rng = std::mt19937_64;

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = std::numbers::pi;

/// splitmix64 finalizer; used to derive independent per-trial seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

template <typename... Rest>
constexpr std::uint64_t mix_seed(std::uint64_t first, std::uint64_t second, Rest... rest) noexcept
{
    return mix_seed(mix_seed(first) ^ second, static_cast<std::uint64_t>(rest)...);
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

/// Circularly-symmetric complex Gaussian sample with E|z|^2 = variance.
inline cplx complex_gaussian(Rng& rng, double variance)
{
    std::normal_distribution<double> nd(0.0, std::sqrt(variance / 2.0));
    const double re = nd(rng);
    const double im = nd(rng);
    return {re, im};
}

} // namespace otfs_isac
