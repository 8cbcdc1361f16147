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

// Closed-loop tracking of one user on a curved ground trajectory: each slot
// the beam points at the constant-velocity prediction from past estimates,
// the radar look yields a raw position, and a centred moving average
// smooths the raw track.

#include "otfs_isac/motion.hpp"
#include "otfs_isac/sim/config.hpp"

#include <cstdint>

namespace otfs_isac::sim {

struct TrackingConfig {
    double uav_altitude_m = 10.0;
    /// Circle on the ground plane; must stay in x > 0.
    double center_x_m = 15.0;
    double center_y_m = 15.0;
    double radius_m = 8.0;
    double start_angle_rad = -kPi / 2;
    /// zeta(t) = speed_mean + speed_amplitude sin(2 pi t / speed_period).
    double speed_mean_mps = 11.0;
    double speed_amplitude_mps = 2.0;
    double speed_period_s = 5.0;
    double slot_s = 0.1;
    std::size_t slots = 100;
    std::size_t smoothing_window = 5;
    std::size_t fit_points = 4;
    double snr_db = 20.0;
    double e = 0.02;
    std::size_t nlos_max_excess = 8;
    std::uint64_t seed = 1;
};

/// Throws std::invalid_argument naming the bad field.
void validate(const TrackingConfig& cfg);

/// True state at time t.
MotionState tracking_truth(const TrackingConfig& cfg, double t);

struct TrackingResult {
    Track truth;
    Track raw;
    Track smoothed;
    /// Mean |‖p̂‖ - ‖p‖| / ‖p‖ in percent.
    double raw_error_pct = 0.0;
    double smoothed_error_pct = 0.0;
    std::size_t missed_looks = 0;
};

/// Frame, array and link settings come from `scenario`; the trajectory and
/// sensing conditions from `cfg`. Deterministic in cfg.seed.
TrackingResult run_tracking(const ScenarioConfig& scenario, const TrackingConfig& cfg);

double mean_range_error_pct(const Track& truth, const Track& estimate);

} // namespace otfs_isac::sim
