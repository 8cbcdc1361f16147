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

// Uniform planar array steering vectors with half-wavelength spacing.
//
// Element (nx, ny), 1-based, is stored at index (nx - 1) * Ny + (ny - 1) and
// carries the phase pi * sin(theta) * (nx sin(phi) + ny cos(phi)).

#include "otfs_isac/common.hpp"

#include <Eigen/Dense>

#include <cstddef>

namespace otfs_isac {

struct UpaConfig {
    std::size_t nx = 4;
    std::size_t ny = 4;

    std::size_t elements() const noexcept { return nx * ny; }
};

/// Throws std::invalid_argument if either dimension is zero.
void validate(const UpaConfig& cfg);

/// Azimuth theta and elevation phi in radians.
///
/// On construction phi is wrapped into [-pi, pi] and theta is reflected into
/// [-pi/2, pi/2] via theta -> pi - theta, which leaves sin(theta) and hence the
/// steering vector unchanged.
class Direction {
public:
    Direction() = default;
    Direction(double azimuth, double elevation);

    double azimuth() const noexcept { return azimuth_; }
    double elevation() const noexcept { return elevation_; }

    friend bool operator==(const Direction&, const Direction&) = default;

private:
    double azimuth_ = 0.0;
    double elevation_ = 0.0;
};

using SteeringVector = Eigen::VectorXcd;

SteeringVector steering(const UpaConfig& cfg, const Direction& dir);

/// b^H a. Throws std::invalid_argument on length mismatch.
cplx beam_gain(const SteeringVector& a, const SteeringVector& b);

} // namespace otfs_isac
