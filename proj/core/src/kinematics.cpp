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

#include "otfs_isac/kinematics.hpp"

#include <algorithm>
#include <stdexcept>

namespace otfs_isac {

Vec3 position_from_polar(double range, const Direction& dir)
{
    const double ct = std::cos(dir.azimuth());
    const double st = std::sin(dir.azimuth());
    const double cp = std::cos(dir.elevation());
    const double sp = std::sin(dir.elevation());
    return range * Vec3(cp * ct, cp * st, -sp);
}

MotionState::MotionState(Vec3 position, double speed, double heading)
    : position_(std::move(position)), speed_(speed), heading_(heading)
{
    if (!position_.allFinite() || !std::isfinite(speed) || !std::isfinite(heading))
        throw std::invalid_argument("motion state must be finite");
    if (position_.norm() <= 0.0)
        throw std::invalid_argument("motion state: user coincides with the UAV");
    if (position_.x() <= 0.0)
        throw std::invalid_argument("motion state: user must lie in front of the array (x > 0)");
    if (speed < 0.0)
        throw std::invalid_argument("motion state: negative speed");
}

Direction direction_of(const Vec3& p)
{
    const double rho = std::hypot(p.x(), p.y());
    return Direction(std::atan2(p.y(), p.x()), std::atan2(-p.z(), rho));
}

Direction MotionState::direction() const
{
    return direction_of(position_);
}

Vec3 MotionState::velocity() const
{
    return speed_ * Vec3(std::cos(heading_), std::sin(heading_), 0.0);
}

double MotionState::radial_angle() const
{
    const Vec3 to_uav = -position_.normalized();
    const Vec3 v_hat(std::cos(heading_), std::sin(heading_), 0.0);
    return std::acos(std::clamp(v_hat.dot(to_uav), -1.0, 1.0));
}

} // namespace otfs_isac
