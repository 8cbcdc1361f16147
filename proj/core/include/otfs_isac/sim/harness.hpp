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

// Monte Carlo experiment loop over (SNR, e, speed) sweep points and trials
// for the three transmission protocols.

#include "otfs_isac/noma_alloc.hpp"
#include "otfs_isac/sim/config.hpp"

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace otfs_isac::sim {

enum class SystemVariant { noma_isac, noma_no_sensing, oma_no_sensing };

std::string_view to_string(SystemVariant v);
/// Throws std::invalid_argument for an unknown name.
SystemVariant variant_from_string(std::string_view name);
inline constexpr SystemVariant kAllVariants[] = {SystemVariant::noma_isac, SystemVariant::noma_no_sensing,
                                                 SystemVariant::oma_no_sensing};

struct TrialResult {
    std::string experiment;
    double snr_db = 0.0;
    double e = 0.0;
    std::optional<double> speed_kmh;  // empty when speeds are drawn per trial
    std::size_t trial = 0;
    SystemVariant variant = SystemVariant::noma_isac;
    Objective objective = Objective::mmf;
    Bound bound = Bound::perfect;
    double r1 = 0.0;
    double r2 = 0.0;
    double w1 = 0.0;
    double w2 = 0.0;
    bool feasible = true;
    bool diverged = false;
    /// Mean over both users of |assumed range - true range| / true range, in percent.
    double range_error_pct = 0.0;
    /// Sensing estimates (noma_isac only): user 1 LOS delay / Doppler, mean e_hat.
    double tau_hat_s = 0.0;
    double nu_hat_hz = 0.0;
    double e_hat = 0.0;

    double rate() const { return objective == Objective::mmf ? std::min(r1, r2) : r1 + r2; }
};

struct RunOptions {
    std::string experiment = "sweep";
    std::vector<SystemVariant> variants{std::begin(kAllVariants), std::end(kAllVariants)};
    /// Called after each finished trial with (done, total).
    std::function<void(std::size_t, std::size_t)> progress;
};

/// Runs every sweep point x trial x requested variant and returns rows in
/// canonical order. Fully determined by the config (including its seed).
/// Errors are rethrown as std::runtime_error naming the sweep point and trial.
std::vector<TrialResult> run_sweep(const ScenarioConfig& cfg, const RunOptions& options = {});

/// Canonical ordering of result rows (by coordinates, then variant,
/// objective, bound).
void sort_results(std::vector<TrialResult>& results);

/// RFC-4180 CSV with a header row and one row per result.
void write_results_csv(std::ostream& os, const std::vector<TrialResult>& results);
/// Throws std::runtime_error if the file cannot be written or results are empty.
void emit_csv(const std::vector<TrialResult>& results, const std::filesystem::path& path);

/// Sweep presets reproducing the figures' axes on top of `base`:
///   5, 6: SNR sweep at e = 0
///   7, 8: e in {0, 0.02, ..., e_max} at 20 dB
///   9:    30 and 60 km/h at e = 0.02, 20 dB
/// Throws std::invalid_argument for other figure numbers.
ScenarioConfig figure_preset(const ScenarioConfig& base, int figure);

/// Mean of rate() over trials, grouped by (snr, e, speed, variant, objective, bound).
struct MeanRate {
    double snr_db = 0.0;
    double e = 0.0;
    std::optional<double> speed_kmh;
    SystemVariant variant = SystemVariant::noma_isac;
    Objective objective = Objective::mmf;
    Bound bound = Bound::perfect;
    double rate = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
    std::size_t count = 0;
};
std::vector<MeanRate> mean_rates(const std::vector<TrialResult>& results);

} // namespace otfs_isac::sim
