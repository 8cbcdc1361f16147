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

// Parametric delay-Doppler multipath channel for the radar echo at the UAV
// and the downlink to a ground user.
//
// Delays are applied cyclically over the frame, which is what a cyclic
// prefix spanning the maximum delay would produce. That keeps the DD shift
// property exact and the matched-filter peaks on-grid.

#include "otfs_isac/array_geometry.hpp"
#include "otfs_isac/dd_signal.hpp"
#include "otfs_isac/kinematics.hpp"

#include <iosfwd>
#include <vector>

namespace otfs_isac {

struct Path {
    cplx gain{};
    double delay_s = 0.0;
    double doppler_hz = 0.0;
    Direction direction{};
    bool is_los = false;
};

/// LOS path first, followed by NLOS paths that arrive no earlier.
class PathSet {
public:
    PathSet() = default;
    /// Throws std::invalid_argument unless exactly one path is LOS, it is the
    /// first entry, every delay is non-negative and no NLOS path precedes it.
    explicit PathSet(std::vector<Path> paths);

    const std::vector<Path>& paths() const noexcept { return paths_; }
    bool empty() const noexcept { return paths_.empty(); }
    std::size_t size() const noexcept { return paths_.size(); }
    const Path& los() const;
    /// Sum of |gain|^2 over NLOS paths divided by |LOS gain|^2.
    double nlos_strength() const;

private:
    std::vector<Path> paths_;
};

struct LinkBudget {
    double g_tx = 1.0;  // linear
    double g_rx = 1.0;  // linear
    double carrier_hz = 5e9;
    double noise_power_w = 1e-12;

    double wavelength_m() const noexcept { return kSpeedOfLight / carrier_hz; }
};

/// Throws std::invalid_argument unless all fields are positive and finite.
void validate(const LinkBudget& budget);

/// h = G_T G_R lambda^2 / ((4 pi)^2 d^2). Rate formulas use h^2.
double path_loss(const LinkBudget& budget, double distance_m);

/// LOS path towards a user.
///   comm  (round_trip = false): delay d/c, Doppler zeta cos(phi_v) f_c / c, gain h(d)
///   radar (round_trip = true):  delay 2d/c, twice that Doppler, gain h(d) sqrt(rcs)
Path los_path_from_kinematics(const MotionState& state, const LinkBudget& budget, bool round_trip,
                              double radar_cross_section = 1.0);

struct NlosWindow {
    std::size_t min_excess_samples = 1;
    std::size_t max_excess_samples = 16;
    /// NLOS Doppler bins are drawn within +-fraction * (N / 2) bins.
    double doppler_fraction = 0.25;
};

/// Scattered paths around `los`: gains i.i.d. CN(0, e |h_los|^2 / count),
/// integer excess delays and on-grid Doppler bins drawn uniformly from the
/// window. Every path occupies its own (delay, Doppler) cell at Chebyshev
/// distance >= 2 from all others (LOS included), so the matched-filter peaks
/// stay separable. The NLOS directions reuse the LOS direction (local
/// scattering around the user). Throws std::invalid_argument for negative e
/// or count == 0, std::runtime_error if the window cannot hold `count` paths.
std::vector<Path> draw_nlos_paths(double e, const Path& los, std::size_t count, const FrameLayout& layout,
                                  Rng& rng, const NlosWindow& window = {});

enum class OffGridPolicy {
    reject,  // throw std::invalid_argument for fractional delay or Doppler
    round,   // snap to the nearest delay sample and Doppler bin
};

/// Multichannel receive signal: one row per array element.
struct ArraySeries {
    Eigen::MatrixXcd samples;  // elements x (M N)
    FrameLayout layout;
};

/// Monostatic echo at the UAV array: per path
///   beta_i * b_i (b_i^H a) * x(t - tau_i) * exp(j 2 pi nu_i t)
/// with a = steering(arrays, tx_dir) and b_i = steering(arrays, path direction),
/// plus CN(0, n0) noise on every element and sample.
ArraySeries apply_radar_channel(const TimeSeries& tx, const PathSet& paths, const Direction& tx_dir,
                                const UpaConfig& arrays, double n0, Rng& rng,
                                OffGridPolicy policy = OffGridPolicy::reject);

/// Single-antenna user: per path h_i (b_i^H a) x(t - tau_i) exp(j 2 pi nu_i t) plus CN(0, n0) noise.
TimeSeries apply_comm_channel(const TimeSeries& tx, const PathSet& paths, const Direction& tx_dir,
                              const UpaConfig& arrays, double n0, Rng& rng,
                              OffGridPolicy policy = OffGridPolicy::reject);

/// Receive combining w^H x. Throws std::invalid_argument on an element-count mismatch.
TimeSeries beamform(const ArraySeries& rx, const SteeringVector& w);

/// One path per line: gain_re,gain_im,delay_s,doppler_hz,azimuth_rad,elevation_rad,los
/// preceded by that header line.
void write_paths_csv(std::ostream& os, const PathSet& paths);
/// Throws std::runtime_error with the line number on malformed input.
PathSet read_paths_csv(std::istream& is);

} // namespace otfs_isac
