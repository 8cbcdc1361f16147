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

#include "otfs_isac/array_geometry.hpp"

#include <stdexcept>

namespace otfs_isac {

void validate(const UpaConfig& cfg)
{
    if (cfg.nx == 0 || cfg.ny == 0)
        throw std::invalid_argument("UPA needs at least one element along each axis");
}

Direction::Direction(double azimuth, double elevation)
{
    if (!std::isfinite(azimuth) || !std::isfinite(elevation))
        throw std::invalid_argument("direction angles must be finite");

    double phi = std::remainder(elevation, 2.0 * kPi);  // [-pi, pi]
    double theta = std::remainder(azimuth, 2.0 * kPi);
    if (theta > kPi / 2)
        theta = kPi - theta;
    else if (theta < -kPi / 2)
        theta = -kPi - theta;
    azimuth_ = theta;
    elevation_ = phi;
}

SteeringVector steering(const UpaConfig& cfg, const Direction& dir)
{
    validate(cfg);
    const double st = std::sin(dir.azimuth());
    const double sp = std::sin(dir.elevation());
    const double cp = std::cos(dir.elevation());
    const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.elements()));

    SteeringVector v(Eigen::Index(cfg.elements()));
    Eigen::Index idx = 0;
    for (std::size_t ix = 1; ix <= cfg.nx; ++ix)
        for (std::size_t iy = 1; iy <= cfg.ny; ++iy) {
            const double phase = kPi * st * (double(ix) * sp + double(iy) * cp);
            v(idx++) = std::polar(scale, phase);
        }
    return v;
}

cplx beam_gain(const SteeringVector& a, const SteeringVector& b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("beam_gain: steering vectors differ in length");
    return b.dot(a);  // Eigen's dot conjugates the left operand
}

} // namespace otfs_isac
