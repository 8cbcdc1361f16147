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

// Motion topology: range / speed / heading from radar estimates, next-slot
// prediction and moving-average smoothing of position tracks.

#include "otfs_isac/kinematics.hpp"

#include <iosfwd>
#include <vector>

namespace otfs_isac {

/// d = c tau / 2. Throws std::invalid_argument for negative tau.
double range_from_delay(double tau_s);

/// Ground-plane triangle between the user, the UAV nadir and the point X
/// where the user's velocity line crosses the x axis.
///   D0: user to X along the velocity line
///   D2: nadir to X
///   D1: UAV to X
struct MotionSegments {
    double d0 = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

/// Throws std::domain_error when the triangle degenerates
/// (sin(theta_v) = 0 or the user already sits on the x axis).
MotionSegments motion_segments(double d, const Direction& dir, double theta_v);

/// Angle between the velocity and the user-to-UAV line:
/// phi_v = pi - arccos((d^2 + D0^2 - D1^2) / (2 d D0)).
/// Throws std::domain_error for degenerate geometry or an arccos argument
/// more than 1e-9 outside [-1, 1].
double velocity_angle(double d, const Direction& dir, double theta_v);

/// zeta = c nu / (cos(phi_v) f_c) for a one-way Doppler nu.
/// Throws std::domain_error if |cos(phi_v)| < 1e-6 (radially blind geometry).
double speed_from_doppler(double nu_hz, double phi_v, double carrier_hz);

/// The closed-form next-slot range
///   d' = sqrt((d + zeta T - d sin(phi))^2 + (d sin(phi))^2),
///   phi = arccos((D0^2 + D1^2 - d^2) / (2 D0 D1)),
/// evaluated literally (the reference range in the arccos is taken as d).
double predict_range_from_segments(double d, double d0, double d1, double speed, double t_otfs);

/// Same formula with the segments computed from the state's geometry.
double predict_range_paper(const MotionState& state, double t_otfs);

/// Constant-velocity step on the ground plane.
MotionState predict_state_kinematic(const MotionState& state, double t_otfs);

struct TrackPoint {
    double t = 0.0;
    Vec3 position = Vec3::Zero();
};

/// Time-ordered positions; timestamps must increase strictly.
class Track {
public:
    Track() = default;
    /// Throws std::invalid_argument if timestamps are not strictly increasing.
    explicit Track(std::vector<TrackPoint> points);

    void push_back(const TrackPoint& p);
    const std::vector<TrackPoint>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }
    const TrackPoint& operator[](std::size_t i) const { return points_[i]; }

private:
    std::vector<TrackPoint> points_;
};

/// Centred moving average of positions; edges use shrunken symmetric
/// windows. Throws std::invalid_argument for an even window, window 0, or a
/// window longer than the track.
Track smooth_track(const Track& track, std::size_t window);

/// p(t) = anchor + velocity (t - t_ref).
struct LinearFit {
    double t_ref = 0.0;
    Vec3 anchor = Vec3::Zero();
    Vec3 velocity = Vec3::Zero();

    Vec3 at(double t) const { return anchor + velocity * (t - t_ref); }
};

/// Least-squares constant-velocity fit through the last `points` entries
/// (all of them if fewer exist). A single point yields zero velocity.
/// Throws std::invalid_argument for an empty track.
LinearFit fit_constant_velocity(const Track& track, std::size_t points);

/// t,true_x,true_y,true_z,est_x,est_y,est_z,range_error_pct
/// Throws std::invalid_argument if the tracks differ in length.
void write_track_csv(std::ostream& os, const Track& truth, const Track& estimate);

} // namespace otfs_isac
