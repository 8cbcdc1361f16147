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

// Two-user downlink NOMA with SIC: rate expressions, closed-form power
// allocations for max-min fairness (MMF) and QoS-constrained sum rate (SR),
// and an exhaustive grid search used as the reference optimizer.
//
// User 1 is the weak user (h1_sq <= h2_sq) and decodes its own signal
// treating user 2 as interference; user 2 removes user 1 first.

#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace otfs_isac {

enum class Bound { perfect, lower, upper };
enum class Objective { mmf, sr };

std::string_view to_string(Bound b);
std::string_view to_string(Objective o);

class ChannelGains {
public:
    /// Inputs are swapped if h1_sq > h2_sq (see swapped()). Throws
    /// std::invalid_argument for negative or non-finite fields or pt <= 0.
    ChannelGains(double h1_sq, double h2_sq, double e, double n0, double pt);

    double h1_sq() const noexcept { return h1_sq_; }
    double h2_sq() const noexcept { return h2_sq_; }
    double e() const noexcept { return e_; }
    double n0() const noexcept { return n0_; }
    double pt() const noexcept { return pt_; }
    bool swapped() const noexcept { return swapped_; }

private:
    double h1_sq_;
    double h2_sq_;
    double e_;
    double n0_;
    double pt_;
    bool swapped_ = false;
};

struct PowerAllocation {
    double w1 = 0.0;
    double w2 = 0.0;
};

struct QosSpec {
    double r1_min = 0.0;
    double r2_min = 0.0;
};

struct Rates {
    double r1 = 0.0;
    double r2 = 0.0;

    double min() const noexcept { return r1 < r2 ? r1 : r2; }
    double sum() const noexcept { return r1 + r2; }
};

struct RateReport {
    RateReport(const ChannelGains& g, Objective o, Bound b) : gains(g), objective(o), bound(b) {}

    ChannelGains gains;
    Objective objective = Objective::mmf;
    Bound bound = Bound::perfect;
    bool feasible = true;
    PowerAllocation allocation;
    double r1 = 0.0;
    double r2 = 0.0;
    /// Closed-form allocation before any fallback.
    std::optional<PowerAllocation> closed_form;
    /// Grid-search allocation, filled whenever it was consulted.
    std::optional<PowerAllocation> oracle;
    /// True when the closed form was out of range, infeasible or beaten by the
    /// grid search by more than the divergence tolerance, so `allocation`
    /// holds the grid-search result instead.
    bool diverged = false;

    double value() const noexcept;
};

/// Objective gap above which a closed form is reported as divergent.
inline constexpr double kDivergenceTolerance = 1e-3;
inline constexpr std::size_t kDefaultOracleSteps = 100000;

/// r1 = log2(1 + w1 h1^2 / (w2 h1^2 + n0)), r2 = log2(1 + w2 h2^2 / n0).
Rates rates_perfect(const ChannelGains& g, const PowerAllocation& a);

/// NLOS as interference (lower) or as useful signal (upper); Bound::perfect
/// forwards to rates_perfect.
Rates rates_bound(const ChannelGains& g, const PowerAllocation& a, Bound bound);

/// As above with separate NLOS strengths for the two users.
Rates rates_bound(const ChannelGains& g, const PowerAllocation& a, Bound bound, double e1, double e2);

double objective_value(const Rates& r, Objective objective);

/// Equal-rate root of the perfect-channel rates.
RateReport mmf_perfect(const ChannelGains& g);

/// Allocation that makes user 1's QoS constraint active.
RateReport sr_perfect(const ChannelGains& g, const QosSpec& q);

/// lower: exact equal-rate root of the lower-bound rates, noise included.
/// upper: w2 = sqrt(1 + e) - 1, checked against the grid search.
RateReport mmf_imperfect(const ChannelGains& g, Bound bound, std::size_t oracle_steps = kDefaultOracleSteps);

/// lower: w2 = (pt(1+e) + n0/h1^2) / 2^r1_min - pt e - n0/h1^2.
/// upper: w2 = pt (sqrt(e^2 + 1) - e), checked against the grid search.
RateReport sr_imperfect(const ChannelGains& g, const QosSpec& q, Bound bound,
                        std::size_t oracle_steps = kDefaultOracleSteps);

/// Noise-free limit of the lower-bound MMF root: sqrt(pt^2 e^2 + pt^2 e) - pt e.
double mmf_lower_noise_free_w2(double pt, double e);

/// Exhaustive search over w2 in {0, pt/steps, ..., pt}; SR skips points that
/// violate the QoS spec. Throws std::invalid_argument for steps < 1000 and
/// std::domain_error when no grid point is feasible.
PowerAllocation grid_oracle(const ChannelGains& g, Objective objective, const QosSpec& q, Bound bound,
                            std::size_t steps = kDefaultOracleSteps);

/// h1_sq,h2_sq,e,n0,pt,objective,bound,w1,w2,r1,r2,feasible
void write_allocation_csv(std::ostream& os, const std::vector<RateReport>& reports);

} // namespace otfs_isac
