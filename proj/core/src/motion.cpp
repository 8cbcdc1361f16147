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

#include "otfs_isac/motion.hpp"

#include "format.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <string>

namespace otfs_isac {
namespace {

constexpr double kClampTolerance = 1e-9;

double checked_acos(double arg, const char* what)
{
    if (!std::isfinite(arg) || arg > 1.0 + kClampTolerance || arg < -1.0 - kClampTolerance)
        throw std::domain_error(std::string(what) + ": arccos argument " + std::to_string(arg) + " out of range");
    return std::acos(std::clamp(arg, -1.0, 1.0));
}

} // namespace

double range_from_delay(double tau_s)
{
    if (!(tau_s >= 0.0) || !std::isfinite(tau_s))
        throw std::invalid_argument("range_from_delay: delay must be non-negative");
    return kSpeedOfLight * tau_s / 2.0;
}

MotionSegments motion_segments(double d, const Direction& dir, double theta_v)
{
    if (!(d > 0.0))
        throw std::invalid_argument("motion_segments: range must be positive");
    const double theta = dir.azimuth();
    const double phi = dir.elevation();
    const double s_v = std::sin(kPi - theta_v);
    if (std::abs(s_v) < 1e-12)
        throw std::domain_error("motion_segments: velocity parallel to the x axis");

    MotionSegments s;
    s.d0 = d * std::sin(theta) * std::cos(phi) / s_v;
    s.d2 = d * std::cos(phi) * std::sin(theta_v - theta) / s_v;
    s.d1 = std::hypot(d * std::sin(phi), s.d2);
    if (std::abs(s.d0) < 1e-12 * d)
        throw std::domain_error("motion_segments: user lies on the x axis");
    return s;
}

double velocity_angle(double d, const Direction& dir, double theta_v)
{
    const MotionSegments s = motion_segments(d, dir, theta_v);
    const double arg = (d * d + s.d0 * s.d0 - s.d1 * s.d1) / (2.0 * d * s.d0);
    return kPi - checked_acos(arg, "velocity_angle");
}

double speed_from_doppler(double nu_hz, double phi_v, double carrier_hz)
{
    const double c = std::cos(phi_v);
    if (std::abs(c) < 1e-6)
        throw std::domain_error("speed_from_doppler: motion is perpendicular to the line of sight");
    if (!(carrier_hz > 0.0))
        throw std::invalid_argument("speed_from_doppler: carrier must be positive");
    return kSpeedOfLight * nu_hz / (c * carrier_hz);
}

double predict_range_from_segments(double d, double d0, double d1, double speed, double t_otfs)
{
    if (!(d > 0.0) || d0 == 0.0 || d1 == 0.0)
        throw std::domain_error("predict_range: degenerate triangle");
    const double phi = checked_acos((d0 * d0 + d1 * d1 - d * d) / (2.0 * d0 * d1), "predict_range");
    const double a = d * std::sin(phi);
    const double x = d + speed * t_otfs - a;
    return std::sqrt(x * x + a * a);
}

double predict_range_paper(const MotionState& state, double t_otfs)
{
    const double d = state.range();
    const MotionSegments s = motion_segments(d, state.direction(), state.heading());
    return predict_range_from_segments(d, s.d0, s.d1, state.speed(), t_otfs);
}

MotionState predict_state_kinematic(const MotionState& state, double t_otfs)
{
    if (state.speed() == 0.0)
        return state;
    return MotionState(state.position() + state.velocity() * t_otfs, state.speed(), state.heading());
}

Track::Track(std::vector<TrackPoint> points)
{
    for (const auto& p : points)
        push_back(p);
}

void Track::push_back(const TrackPoint& p)
{
    if (!points_.empty() && !(p.t > points_.back().t))
        throw std::invalid_argument("track timestamps must increase strictly");
    points_.push_back(p);
}

Track smooth_track(const Track& track, std::size_t window)
{
    if (window == 0 || window % 2 == 0)
        throw std::invalid_argument("smoothing window must be a positive odd number");
    if (window > track.size())
        throw std::invalid_argument("smoothing window " + std::to_string(window) + " exceeds track length " +
                                    std::to_string(track.size()));
    const std::size_t half = window / 2;
    const std::size_t len = track.size();

    std::vector<TrackPoint> out(track.points());
    for (std::size_t i = 0; i < len; ++i) {
        const std::size_t h = std::min({half, i, len - 1 - i});
        Vec3 acc = Vec3::Zero();
        for (std::size_t j = i - h; j <= i + h; ++j)
            acc += track[j].position;
        out[i].position = acc / static_cast<double>(2 * h + 1);
    }
    return Track(std::move(out));
}

LinearFit fit_constant_velocity(const Track& track, std::size_t points)
{
    const std::size_t len = track.size();
    if (len == 0)
        throw std::invalid_argument("fit_constant_velocity: empty track");
    const std::size_t count = std::min(std::max<std::size_t>(points, 1), len);
    const std::size_t first = len - count;

    LinearFit fit;
    for (std::size_t i = first; i < len; ++i) {
        fit.t_ref += track[i].t;
        fit.anchor += track[i].position;
    }
    fit.t_ref /= static_cast<double>(count);
    fit.anchor /= static_cast<double>(count);
    if (count < 2)
        return fit;

    double stt = 0.0;
    Vec3 stp = Vec3::Zero();
    for (std::size_t i = first; i < len; ++i) {
        const double dt = track[i].t - fit.t_ref;
        stt += dt * dt;
        stp += dt * (track[i].position - fit.anchor);
    }
    fit.velocity = stp / stt;
    return fit;
}

void write_track_csv(std::ostream& os, const Track& truth, const Track& estimate)
{
    if (truth.size() != estimate.size())
        throw std::invalid_argument("write_track_csv: tracks differ in length");
    using detail::format_double;
    os << "t,true_x,true_y,true_z,est_x,est_y,est_z,range_error_pct\n";
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const Vec3& p = truth[i].position;
        const Vec3& q = estimate[i].position;
        const double err = 100.0 * std::abs(q.norm() - p.norm()) / p.norm();
        os << format_double(truth[i].t) << ',' << format_double(p.x()) << ',' << format_double(p.y()) << ','
           << format_double(p.z()) << ',' << format_double(q.x()) << ',' << format_double(q.y()) << ','
           << format_double(q.z()) << ',' << format_double(err) << '\n';
    }
}

} // namespace otfs_isac
