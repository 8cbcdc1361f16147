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

// Static SVG line charts for the rate sweeps and the tracking overlay.

#include "otfs_isac/sim/harness.hpp"
#include "otfs_isac/sim/tracking.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace otfs_isac::sim {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    bool dashed = false;
    bool markers = true;
};

struct Chart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    /// Keep x and y on the same scale (trajectory plots).
    bool equal_aspect = false;
};

/// Throws std::invalid_argument if a series has mismatched x / y lengths
/// or the chart holds no points.
void write_svg(std::ostream& os, const Chart& chart);

/// Chart for one figure number (5..9) from sweep results. Throws
/// std::invalid_argument if the results lack the figure's axis.
Chart figure_chart(const std::vector<TrialResult>& results, int figure);

/// Ground-plane overlay of the true, raw and smoothed tracks.
Chart tracking_chart(const TrackingResult& result);

/// Writes figN.svg for each requested figure into `dir` (created if
/// missing) and returns the written paths. Throws std::runtime_error for an
/// unwritable directory or empty results.
std::vector<std::filesystem::path> emit_plots(const std::vector<TrialResult>& results,
                                              const std::filesystem::path& dir, const std::vector<int>& figures);

void emit_tracking_plot(const TrackingResult& result, const std::filesystem::path& path);

} // namespace otfs_isac::sim
