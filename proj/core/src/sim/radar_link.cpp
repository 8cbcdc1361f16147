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

#include "otfs_isac/sim/radar_link.hpp"

#include "otfs_isac/motion.hpp"

namespace otfs_isac::sim {

RadarSetup RadarSetup::from_config(const ScenarioConfig& cfg, double n0)
{
    RadarSetup s;
    s.layout = cfg.frame.layout();
    s.arrays = cfg.arrays;
    s.budget = cfg.budget(n0);
    s.pt_w = cfg.link.pt_w;
    s.waveform = cfg.frame.waveform;
    s.nlos_paths = cfg.nlos.path_count;
    s.nlos_window = cfg.nlos.window;
    s.radar_cross_section = cfg.link.radar_cross_section;
    s.detect_threshold = cfg.link.detect_threshold;
    s.music_window_rad = cfg.link.music_window_rad;
    return s;
}

TimeSeries sensing_frame(const RadarSetup& setup, Rng& rng)
{
    const FrameLayout& l = setup.layout;
    const double energy = setup.pt_w * static_cast<double>(l.samples());
    const DdGrid dd = setup.waveform == SensingWaveform::pilot ? pilot_frame(l.m, l.n, energy)
                                                               : qpsk_frame(l.m, l.n, energy, rng);
    return modulate(dd, l.timing);
}

RadarObservation sense_user(const MotionState& truth, const Direction& beam, const TimeSeries& tx,
                            const RadarSetup& setup, double e_radar, Rng& rng)
{
    const Path los = los_path_from_kinematics(truth, setup.budget, true, setup.radar_cross_section);
    std::vector<Path> paths{los};
    if (e_radar > 0.0) {
        auto nlos = draw_nlos_paths(e_radar, los, setup.nlos_paths, setup.layout, rng, setup.nlos_window);
        paths.insert(paths.end(), nlos.begin(), nlos.end());
    }
    const ArraySeries rx = apply_radar_channel(tx, PathSet(std::move(paths)), beam, setup.arrays,
                                               setup.budget.noise_power_w, rng, OffGridPolicy::round);

    const SteeringVector w = steering(setup.arrays, beam);
    const MfMap map = matched_filter_map(beamform(rx, w), tx);

    RadarObservation obs;
    obs.detections = detect_peaks(map, setup.detect_threshold);
    if (obs.detections.empty())
        return obs;
    const Detection& first = obs.detections.front();
    obs.los_delay_s = first.delay_s;
    obs.los_doppler_hz = first.doppler_hz;
    obs.range_m = range_from_delay(first.delay_s);
    obs.e_hat = estimate_nlos_strength(obs.detections).e_hat;

    // With the pilot waveform every slot carries one pulse, so the samples
    // at nM + LOS delay hold the LOS echo alone: one snapshot per slot.
    Eigen::MatrixXcd snapshots;
    const auto len = static_cast<Eigen::Index>(setup.layout.samples());
    if (setup.waveform == SensingWaveform::pilot) {
        const auto m = static_cast<Eigen::Index>(setup.layout.m);
        const auto n = static_cast<Eigen::Index>(setup.layout.n);
        snapshots.resize(rx.samples.rows(), n);
        for (Eigen::Index s = 0; s < n; ++s)
            snapshots.col(s) = rx.samples.col((s * m + static_cast<Eigen::Index>(first.delay_bin)) % len);
    } else {
        snapshots = rx.samples;
    }
    const auto dirs =
        estimate_angles(snapshots, 1, setup.arrays, AngleGrid::around(beam, setup.music_window_rad));
    obs.direction = dirs.empty() ? beam : dirs.front();
    obs.position = position_from_polar(obs.range_m, obs.direction);
    obs.valid = obs.range_m > 0.0;
    return obs;
}

} // namespace otfs_isac::sim
