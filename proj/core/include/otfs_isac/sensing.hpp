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

// Radar parameter extraction at the UAV: matched-filter delay-Doppler map,
// peak picking, NLOS strength and MUSIC angle estimation.

#include "otfs_isac/array_geometry.hpp"
#include "otfs_isac/dd_signal.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace otfs_isac {

/// Correlation values over delay lags 0..rows-1 and Doppler bins
/// k = -N/2 .. N/2-1 (column c holds k = c - N/2).
struct MfMap {
    Eigen::MatrixXcd values;
    double delay_bin_s = 0.0;
    double doppler_bin_hz = 0.0;

    std::size_t delay_bins() const noexcept { return static_cast<std::size_t>(values.rows()); }
    std::size_t doppler_bins() const noexcept { return static_cast<std::size_t>(values.cols()); }
    long doppler_index(std::size_t column) const noexcept
    {
        return static_cast<long>(column) - static_cast<long>(doppler_bins() / 2);
    }
};

/// j(l, k) = sum_t rx[t] conj(tx[(t - l) mod MN]) exp(-j 2 pi k t / (MN)).
/// One MN-point FFT per delay lag. `max_delay_bins` limits the lags scanned
/// (default: all M). Throws std::invalid_argument if the frames differ in shape.
MfMap matched_filter_map(const TimeSeries& rx, const TimeSeries& tx, std::optional<std::size_t> max_delay_bins = {});

struct Detection {
    double delay_s = 0.0;
    double doppler_hz = 0.0;
    double magnitude = 0.0;
    bool is_los = false;
    std::size_t delay_bin = 0;
    long doppler_bin = 0;
    cplx value{};
};

/// Local maxima (8-neighbourhood, Doppler axis cyclic) at or above
/// threshold_rel * global max, taken greedily by magnitude with a +-1 bin
/// guard. Returned in order of delay; the earliest is flagged LOS.
/// Throws std::invalid_argument for an empty map or threshold outside (0, 1).
std::vector<Detection> detect_peaks(const MfMap& map, double threshold_rel);

struct NlosStrengthEstimate {
    double e_hat = 0.0;
};

/// e_hat = sum over NLOS |j|^2 / |j_LOS|^2.
/// Throws std::invalid_argument if there is no LOS detection.
NlosStrengthEstimate estimate_nlos_strength(const std::vector<Detection>& detections);

/// Scan grid for MUSIC. Grid points sit on integer multiples of `step`
/// inside each range. The default elevation range [0, pi/2] together with
/// azimuth in [-pi/2, pi/2] covers every ground user once.
struct AngleGrid {
    double step = 0.01;
    double azimuth_min = -kPi / 2;
    double azimuth_max = kPi / 2;
    double elevation_min = 0.0;
    double elevation_max = kPi / 2;

    /// Window of +-half_width around `centre`, clipped to the default ranges.
    static AngleGrid around(const Direction& centre, double half_width, double step = 0.01);

    std::vector<double> azimuths() const;
    std::vector<double> elevations() const;
};

/// R = X X^H / S for an elements x snapshots matrix.
Eigen::MatrixXcd sample_covariance(const Eigen::MatrixXcd& snapshots);

/// MUSIC pseudo-spectrum 1 / ||E_n^H b||^2 over the grid
/// (rows: azimuths, columns: elevations).
Eigen::MatrixXd music_spectrum(const Eigen::MatrixXcd& snapshots, std::size_t source_count, const UpaConfig& arrays,
                               const AngleGrid& grid);

/// Directions of the `source_count` strongest pseudo-spectrum peaks.
/// Throws std::invalid_argument if source_count is 0, not below the element
/// count, or exceeds the snapshot count.
std::vector<Direction> estimate_angles(const Eigen::MatrixXcd& snapshots, std::size_t source_count,
                                       const UpaConfig& arrays, const AngleGrid& grid = {});

/// delay_bin,doppler_bin,magnitude for every cell.
void write_mf_map_csv(std::ostream& os, const MfMap& map);

} // namespace otfs_isac
