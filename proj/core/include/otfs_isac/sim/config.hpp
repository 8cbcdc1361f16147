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

// Scenario configuration: INI-style sections [frame], [arrays], [users],
// [link], [nlos], [qos], [sweep]. Omitted keys keep the defaults below,
// which reproduce the full-scale setup (5 GHz, 1024 x 1024 frame,
// 4.4 ms frame, 7 m / 15 m users, e in [0, 0.1]).

#include "otfs_isac/array_geometry.hpp"
#include "otfs_isac/channel.hpp"
#include "otfs_isac/dd_signal.hpp"
#include "otfs_isac/noma_alloc.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace otfs_isac::sim {

enum class SensingWaveform { pilot, qpsk };

struct FrameConfig {
    std::size_t m = 1024;
    std::size_t n = 1024;
    double frame_duration_s = 4.4e-3;
    double carrier_hz = 5e9;
    /// Overrides T / M; used by the desk-scale preset to keep range resolution.
    std::optional<double> sample_interval_s;
    /// Reserved pilot/guard region of the no-sensing baselines, in Doppler rows and delay columns.
    std::size_t guard_doppler = 30;
    std::size_t guard_delay = 60;
    SensingWaveform waveform = SensingWaveform::pilot;

    FrameLayout layout() const;
    /// 1 - (gD M + gT N - gD gT) / (M N).
    double overhead_multiplier() const;
};

struct UserConfig {
    double d1_m = 7.0;
    double d2_m = 15.0;
    double speed_min_kmh = 30.0;
    double speed_max_kmh = 60.0;
    double uav_altitude_m = 5.0;
    /// Bearings are drawn uniformly in +-max_bearing_rad around +x.
    double max_bearing_rad = kPi / 6;
    std::size_t history_slots = 5;
    double estimation_interval_s = 0.05;
};

struct LinkConfig {
    double gt_db = 0.0;
    double gr_db = 0.0;
    double pt_w = 1.0;
    /// Age of the pilot-based CSI of the no-sensing baselines; defaults to the frame duration.
    std::optional<double> csi_age_s;
    double radar_cross_section = 1.0;
    /// Detection threshold relative to the strongest matched-filter peak.
    double detect_threshold = 0.05;
    /// Half-width of the MUSIC scan window around the predicted direction.
    double music_window_rad = 0.1;
};

struct NlosConfig {
    double e_min = 0.0;
    double e_max = 0.1;
    std::size_t path_count = 3;
    /// Radar NLOS strength = radar_e_scale * communication e.
    double radar_e_scale = 1.0;
    NlosWindow window{};
};

struct SweepConfig {
    std::vector<double> snr_db;    // default 0:5:40
    std::vector<double> e;         // default {0}
    std::vector<double> speed_kmh; // empty: uniform in [speed_min, speed_max] per trial
    std::size_t trials = 200;
    std::uint64_t seed = 1;
    std::size_t oracle_steps = 10000;
    /// Give noma_isac the true channel (skips sensing).
    bool perfect_csi = false;
};

struct ScenarioConfig {
    FrameConfig frame;
    UpaConfig arrays;
    UserConfig users;
    LinkConfig link;
    NlosConfig nlos;
    QosSpec qos{0.5, 0.0};
    SweepConfig sweep;

    LinkBudget budget(double n0) const;
    double csi_age_s() const { return link.csi_age_s.value_or(frame.frame_duration_s); }
};

/// Error naming the offending key (section.key) or the line of a parse error.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Throws ConfigError on the first invalid field.
void validate(const ScenarioConfig& cfg);

ScenarioConfig default_config();
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// M = N = 64 with the sample interval of the full-size frame and the guard
/// region scaled by the same factor.
void apply_desk_scale(ScenarioConfig& cfg);

/// "a:step:b" ranges (inclusive) and comma lists. Throws std::invalid_argument.
std::vector<double> parse_axis(const std::string& text);

/// Canonical key = value dump; the manifest echoes it.
std::string to_ini(const ScenarioConfig& cfg);

} // namespace otfs_isac::sim
