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

// One radar look at one user: synthesize the echo, run the matched filter,
// pick peaks, estimate NLOS strength and the direction, and turn the LOS
// delay plus direction into a position estimate.

#include "otfs_isac/channel.hpp"
#include "otfs_isac/sensing.hpp"
#include "otfs_isac/sim/config.hpp"

#include <optional>
#include <vector>

namespace otfs_isac::sim {

struct RadarSetup {
    FrameLayout layout;
    UpaConfig arrays;
    LinkBudget budget;
    double pt_w = 1.0;
    SensingWaveform waveform = SensingWaveform::pilot;
    std::size_t nlos_paths = 3;
    NlosWindow nlos_window{};
    double radar_cross_section = 1.0;
    double detect_threshold = 0.05;
    double music_window_rad = 0.1;

    static RadarSetup from_config(const ScenarioConfig& cfg, double n0);
};

/// Transmit frame carrying pt watts per sample on average. The pilot frame
/// is deterministic; the QPSK frame draws its symbols from `rng`.
TimeSeries sensing_frame(const RadarSetup& setup, Rng& rng);

struct RadarObservation {
    bool valid = false;  // false when no peak cleared the threshold
    double range_m = 0.0;
    Direction direction{};
    Vec3 position = Vec3::Zero();
    double los_delay_s = 0.0;
    double los_doppler_hz = 0.0;
    double e_hat = 0.0;
    std::vector<Detection> detections;
};

/// Senses `truth` with the transmit and receive beams pointed at `beam`.
/// `e_radar` sets the echo's NLOS strength, n0 the per-element noise power.
RadarObservation sense_user(const MotionState& truth, const Direction& beam, const TimeSeries& tx,
                            const RadarSetup& setup, double e_radar, Rng& rng);

} // namespace otfs_isac::sim
