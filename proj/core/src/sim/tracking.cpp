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

#include "otfs_isac/sim/tracking.hpp"

#include "otfs_isac/sim/radar_link.hpp"

#include <stdexcept>
#include <string>

namespace otfs_isac::sim {
namespace {

constexpr std::uint64_t kTrackingStream = 0x7472616b;

void require(bool ok, const char* field)
{
    if (!ok)
        throw std::invalid_argument(std::string("tracking: invalid ") + field);
}

// Arc length travelled since t = 0 under the sinusoidal speed profile.
double arc_length(const TrackingConfig& cfg, double t)
{
    const double w = 2.0 * kPi / cfg.speed_period_s;
    return cfg.speed_mean_mps * t + cfg.speed_amplitude_mps * (1.0 - std::cos(w * t)) / w;
}

} // namespace

void validate(const TrackingConfig& cfg)
{
    require(cfg.uav_altitude_m > 0.0, "uav_altitude_m");
    require(cfg.radius_m > 0.0, "radius_m");
    require(cfg.center_x_m - cfg.radius_m > 0.0, "center_x_m (circle must stay in x > 0)");
    require(cfg.speed_period_s > 0.0, "speed_period_s");
    require(cfg.speed_mean_mps > std::abs(cfg.speed_amplitude_mps), "speed_mean_mps");
    require(cfg.slot_s > 0.0, "slot_s");
    require(cfg.slots >= cfg.smoothing_window && cfg.slots >= 2, "slots");
    require(cfg.smoothing_window % 2 == 1, "smoothing_window");
    require(cfg.fit_points >= 2, "fit_points");
    require(cfg.e >= 0.0, "e");
    require(cfg.nlos_max_excess >= 1, "nlos_max_excess");
}

MotionState tracking_truth(const TrackingConfig& cfg, double t)
{
    const double alpha = cfg.start_angle_rad + arc_length(cfg, t) / cfg.radius_m;
    const Vec3 p(cfg.center_x_m + cfg.radius_m * std::cos(alpha), cfg.center_y_m + cfg.radius_m * std::sin(alpha),
                 -cfg.uav_altitude_m);
    const double w = 2.0 * kPi / cfg.speed_period_s;
    const double speed = cfg.speed_mean_mps + cfg.speed_amplitude_mps * std::sin(w * t);
    return MotionState(p, speed, alpha + kPi / 2);
}

double mean_range_error_pct(const Track& truth, const Track& estimate)
{
    if (truth.size() != estimate.size() || truth.empty())
        throw std::invalid_argument("mean_range_error_pct: tracks differ in length or are empty");
    double acc = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double d = truth[i].position.norm();
        acc += std::abs(estimate[i].position.norm() - d) / d;
    }
    return 100.0 * acc / static_cast<double>(truth.size());
}

TrackingResult run_tracking(const ScenarioConfig& scenario, const TrackingConfig& cfg)
{
    validate(cfg);
    const LinkBudget unit = scenario.budget(1.0);
    const MotionState start = tracking_truth(cfg, 0.0);
    const double h = path_loss(unit, start.range());
    const double n0 = scenario.link.pt_w * h * h / db_to_linear(cfg.snr_db);

    RadarSetup setup = RadarSetup::from_config(scenario, n0);
    setup.nlos_window.max_excess_samples = cfg.nlos_max_excess;
    setup.nlos_window.min_excess_samples = std::min(setup.nlos_window.min_excess_samples, cfg.nlos_max_excess);

    Rng rng(mix_seed(cfg.seed, kTrackingStream));
    const TimeSeries tx = sensing_frame(setup, rng);

    TrackingResult out;
    for (std::size_t s = 0; s < cfg.slots; ++s) {
        const double t = static_cast<double>(s) * cfg.slot_s;
        const MotionState truth = tracking_truth(cfg, t);

        // First look is cued by the true position (initial acquisition).
        Vec3 predicted = truth.position();
        if (out.raw.size() >= 2)
            predicted = fit_constant_velocity(out.raw, cfg.fit_points).at(t);
        else if (out.raw.size() == 1)
            predicted = out.raw[0].position;
        const Direction beam = direction_of(predicted);

        const RadarObservation obs = sense_user(truth, beam, tx, setup, cfg.e, rng);
        Vec3 est = predicted;
        if (obs.valid)
            est = obs.position;
        else
            ++out.missed_looks;

        out.truth.push_back({t, truth.position()});
        out.raw.push_back({t, est});
    }
    out.smoothed = smooth_track(out.raw, cfg.smoothing_window);
    out.raw_error_pct = mean_range_error_pct(out.truth, out.raw);
    out.smoothed_error_pct = mean_range_error_pct(out.truth, out.smoothed);
    return out;
}

} // namespace otfs_isac::sim
