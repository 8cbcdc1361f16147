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

// UAV-centred frame: the UAV sits at the origin, users move on the ground
// plane z = -H. For a user at p = (x, y, z) with x > 0
//   azimuth   theta = atan2(y, x)                 (ground bearing from +x)
//   elevation phi   = atan2(-z, sqrt(x^2 + y^2))  (depression below the UAV)
// so p = d (cos(phi) cos(theta), cos(phi) sin(theta), -sin(phi)).
// The same (theta, phi) pair feeds the steering vector formula.

#include "otfs_isac/array_geometry.hpp"

#include <Eigen/Dense>

namespace otfs_isac {

using Vec3 = Eigen::Vector3d;

/// Position for a given range and direction in the frame above.
Vec3 position_from_polar(double range, const Direction& dir);

/// Direction of a position in the frame above (azimuth from x and y,
/// elevation as depression below the UAV).
Direction direction_of(const Vec3& position);

class MotionState {
public:
    MotionState() = default;
    /// Throws std::invalid_argument for a zero-range position, negative speed
    /// or a user behind the array (x <= 0), where azimuth becomes ambiguous.
    MotionState(Vec3 position, double speed, double heading);

    const Vec3& position() const noexcept { return position_; }
    double speed() const noexcept { return speed_; }
    /// Ground-plane heading, radians from +x towards +y.
    double heading() const noexcept { return heading_; }

    double range() const { return position_.norm(); }
    Direction direction() const;
    Vec3 velocity() const;

    /// Angle between the velocity and the user-to-UAV line; 0 means the user
    /// is closing in. cos of this angle scales the Doppler shift.
    double radial_angle() const;

private:
    Vec3 position_{1.0, 0.0, 0.0};
    double speed_ = 0.0;
    double heading_ = 0.0;
};

} // namespace otfs_isac
