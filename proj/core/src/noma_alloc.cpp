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

#include "otfs_isac/noma_alloc.hpp"

#include "format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace otfs_isac {
namespace {

// log2(1 + num / den) with 0 / 0 read as no signal.
double rate(double num, double den)
{
    if (num <= 0.0)
        return 0.0;
    if (den <= 0.0)
        return std::numeric_limits<double>::infinity();
    return std::log2(1.0 + num / den);
}

bool meets(const Rates& r, const QosSpec& q)
{
    // A hair of slack so an allocation built to hit r1_min exactly is not
    // rejected over the last ulp.
    constexpr double slack = 1e-12;
    return r.r1 >= q.r1_min - slack && r.r2 >= q.r2_min - slack;
}

void check_qos(const QosSpec& q)
{
    if (!(q.r1_min >= 0.0) || !(q.r2_min >= 0.0) || !std::isfinite(q.r1_min) || !std::isfinite(q.r2_min))
        throw std::invalid_argument("QoS minimum rates must be non-negative");
}

RateReport make_report(const ChannelGains& g, Objective o, Bound b, const PowerAllocation& a)
{
    RateReport rep{g, o, b};
    rep.allocation = a;
    const Rates r = rates_bound(g, a, b);
    rep.r1 = r.r1;
    rep.r2 = r.r2;
    return rep;
}

RateReport infeasible_report(const ChannelGains& g, Objective o, Bound b)
{
    RateReport rep{g, o, b};
    rep.feasible = false;
    return rep;
}

bool in_budget(double w2, double pt) { return w2 >= 0.0 && w2 <= pt && std::isfinite(w2); }

// Closed form checked against the grid search; the grid result replaces it
// when the closed form is out of range, infeasible, or clearly suboptimal.
RateReport checked_closed_form(const ChannelGains& g, Objective o, Bound b, const QosSpec& q, double w2,
                               std::size_t steps)
{
    const double pt = g.pt();
    const PowerAllocation closed{pt - w2, w2};

    std::optional<PowerAllocation> oracle;
    try {
        oracle = grid_oracle(g, o, q, b, steps);
    } catch (const std::domain_error&) {
        // No feasible grid point: the QoS spec cannot be met.
    }

    bool diverged = false;
    if (!in_budget(w2, pt)) {
        diverged = true;
    } else {
        const Rates rc = rates_bound(g, closed, b);
        if (o == Objective::sr && !meets(rc, q))
            diverged = true;
        else if (oracle) {
            const double gap = objective_value(rates_bound(g, *oracle, b), o) - objective_value(rc, o);
            diverged = gap > kDivergenceTolerance;
        }
    }

    RateReport rep = !diverged ? make_report(g, o, b, closed)
                     : oracle  ? make_report(g, o, b, *oracle)
                               : infeasible_report(g, o, b);
    rep.closed_form = closed;
    rep.oracle = oracle;
    rep.diverged = diverged;
    if (!oracle && o == Objective::sr)
        rep.feasible = false;
    return rep;
}

} // namespace

std::string_view to_string(Bound b)
{
    switch (b) {
    case Bound::perfect: return "perfect";
    case Bound::lower: return "lower";
    case Bound::upper: return "upper";
    }
    return "?";
}

std::string_view to_string(Objective o)
{
    return o == Objective::mmf ? "mmf" : "sr";
}

ChannelGains::ChannelGains(double h1_sq, double h2_sq, double e, double n0, double pt)
    : h1_sq_(h1_sq), h2_sq_(h2_sq), e_(e), n0_(n0), pt_(pt)
{
    for (double v : {h1_sq, h2_sq, e, n0, pt})
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("channel gains, e, n0 and pt must be non-negative and finite");
    if (!(pt > 0.0))
        throw std::invalid_argument("power budget pt must be positive");
    if (h1_sq_ > h2_sq_) {
        std::swap(h1_sq_, h2_sq_);
        swapped_ = true;
    }
}

double RateReport::value() const noexcept
{
    return objective == Objective::mmf ? std::min(r1, r2) : r1 + r2;
}

Rates rates_perfect(const ChannelGains& g, const PowerAllocation& a)
{
    return {rate(a.w1 * g.h1_sq(), a.w2 * g.h1_sq() + g.n0()), rate(a.w2 * g.h2_sq(), g.n0())};
}

Rates rates_bound(const ChannelGains& g, const PowerAllocation& a, Bound bound)
{
    return rates_bound(g, a, bound, g.e(), g.e());
}

Rates rates_bound(const ChannelGains& g, const PowerAllocation& a, Bound bound, double e1, double e2)
{
    const double h1 = g.h1_sq();
    const double h2 = g.h2_sq();
    const double n0 = g.n0();
    const double w1 = a.w1;
    const double w2 = a.w2;
    switch (bound) {
    case Bound::perfect:
        return rates_perfect(g, a);
    case Bound::lower:
        return {rate(w1 * h1, w2 * (1.0 + e1) * h1 + w1 * e1 * h1 + n0),
                rate(w2 * h2, (w1 + w2) * e2 * h2 + n0)};
    case Bound::upper:
        return {rate(w1 * (1.0 + e1) * h1, w2 * (1.0 + e1) * h1 + n0),
                rate(w2 * (1.0 + e2) * h2, w1 * e2 * h2 + n0)};
    }
    throw std::logic_error("unknown bound");
}

double objective_value(const Rates& r, Objective objective)
{
    return objective == Objective::mmf ? r.min() : r.sum();
}

RateReport mmf_perfect(const ChannelGains& g)
{
    const double h1 = g.h1_sq();
    const double h2 = g.h2_sq();
    const double n0 = g.n0();
    const double pt = g.pt();
    // Positive root of h1 h2 w2^2 + (h1 + h2) n0 w2 - pt h1 n0 = 0, written
    // in the cancellation-free form 2c / (b + sqrt(b^2 + 4ac)).
    const double b = (h1 + h2) * n0;
    const double c = pt * h1 * n0;
    const double disc = std::sqrt(b * b + 4.0 * h1 * h2 * c);
    double w2 = b + disc > 0.0 ? 2.0 * c / (b + disc) : 0.0;
    w2 = std::clamp(w2, 0.0, pt);
    RateReport rep = make_report(g, Objective::mmf, Bound::perfect, {pt - w2, w2});
    rep.closed_form = rep.allocation;
    return rep;
}

RateReport sr_perfect(const ChannelGains& g, const QosSpec& q)
{
    check_qos(q);
    const double h1 = g.h1_sq();
    const double h2 = g.h2_sq();
    const double n0 = g.n0();
    const double pt = g.pt();
    const double p1 = std::exp2(q.r1_min);
    if (h1 <= 0.0 || h2 <= 0.0)
        return infeasible_report(g, Objective::sr, Bound::perfect);

    const double w2 = (pt * h1 - (p1 - 1.0) * n0) / (p1 * h1);
    if (!(w2 >= 0.0) || w2 < (std::exp2(q.r2_min) - 1.0) * n0 / h2)
        return infeasible_report(g, Objective::sr, Bound::perfect);
    RateReport rep = make_report(g, Objective::sr, Bound::perfect, {pt - w2, std::min(w2, pt)});
    rep.closed_form = rep.allocation;
    return rep;
}

double mmf_lower_noise_free_w2(double pt, double e)
{
    return std::sqrt(pt * pt * e * e + pt * pt * e) - pt * e;
}

RateReport mmf_imperfect(const ChannelGains& g, Bound bound, std::size_t oracle_steps)
{
    const double pt = g.pt();
    const double e = g.e();
    switch (bound) {
    case Bound::perfect:
        return mmf_perfect(g);
    case Bound::lower: {
        if (g.h1_sq() <= 0.0 || g.h2_sq() <= 0.0)
            return make_report(g, Objective::mmf, Bound::lower, {pt, 0.0});
        // Equal SINRs give w2^2 + (2 pt e + a + b) w2 - (pt^2 e + pt b) = 0
        // with a = n0 / h1^2 and b = n0 / h2^2. The noise-free limit is
        // mmf_lower_noise_free_w2; at e = 0 it is the perfect-channel root.
        const double a = g.n0() / g.h1_sq();
        const double b = g.n0() / g.h2_sq();
        const double lin = 2.0 * pt * e + a + b;
        const double c = pt * pt * e + pt * b;
        const double disc = std::sqrt(lin * lin + 4.0 * c);
        const double w2 = std::clamp(lin + disc > 0.0 ? 2.0 * c / (lin + disc) : 0.0, 0.0, pt);
        RateReport rep = make_report(g, Objective::mmf, Bound::lower, {pt - w2, w2});
        rep.closed_form = rep.allocation;
        return rep;
    }
    case Bound::upper:
        return checked_closed_form(g, Objective::mmf, Bound::upper, {}, std::sqrt(1.0 + e) - 1.0, oracle_steps);
    }
    throw std::logic_error("unknown bound");
}

RateReport sr_imperfect(const ChannelGains& g, const QosSpec& q, Bound bound, std::size_t oracle_steps)
{
    check_qos(q);
    const double pt = g.pt();
    const double e = g.e();
    switch (bound) {
    case Bound::perfect:
        return sr_perfect(g, q);
    case Bound::lower: {
        if (g.h1_sq() <= 0.0 || g.h2_sq() <= 0.0)
            return infeasible_report(g, Objective::sr, Bound::lower);
        const double a = g.n0() / g.h1_sq();
        const double w2 = (pt * (1.0 + e) + a) / std::exp2(q.r1_min) - pt * e - a;
        RateReport rep{g, Objective::sr, Bound::lower};
        rep.closed_form = PowerAllocation{pt - w2, w2};
        if (!in_budget(w2, pt)) {
            rep.feasible = false;
            return rep;
        }
        rep = make_report(g, Objective::sr, Bound::lower, {pt - w2, w2});
        rep.closed_form = rep.allocation;
        if (!meets({rep.r1, rep.r2}, q)) {
            rep.feasible = false;
            rep.r1 = rep.r2 = 0.0;
            rep.allocation = {};
        }
        return rep;
    }
    case Bound::upper:
        return checked_closed_form(g, Objective::sr, Bound::upper, q, pt * (std::sqrt(e * e + 1.0) - e),
                                   oracle_steps);
    }
    throw std::logic_error("unknown bound");
}

PowerAllocation grid_oracle(const ChannelGains& g, Objective objective, const QosSpec& q, Bound bound,
                            std::size_t steps)
{
    if (steps < 1000)
        throw std::invalid_argument("grid_oracle needs at least 1000 steps");
    check_qos(q);
    const double pt = g.pt();
    double best = -std::numeric_limits<double>::infinity();
    std::optional<PowerAllocation> best_alloc;
    for (std::size_t i = 0; i <= steps; ++i) {
        const double w2 = i == steps ? pt : pt * static_cast<double>(i) / static_cast<double>(steps);
        const PowerAllocation a{pt - w2, w2};
        const Rates r = rates_bound(g, a, bound);
        if (objective == Objective::sr && !meets(r, q))
            continue;
        const double v = objective_value(r, objective);
        if (v > best) {
            best = v;
            best_alloc = a;
        }
    }
    if (!best_alloc)
        throw std::domain_error("grid_oracle: no allocation satisfies the QoS constraints");
    return *best_alloc;
}

void write_allocation_csv(std::ostream& os, const std::vector<RateReport>& reports)
{
    using detail::format_double;
    os << "h1_sq,h2_sq,e,n0,pt,objective,bound,w1,w2,r1,r2,feasible\n";
    for (const RateReport& r : reports)
        os << format_double(r.gains.h1_sq()) << ',' << format_double(r.gains.h2_sq()) << ','
           << format_double(r.gains.e()) << ',' << format_double(r.gains.n0()) << ',' << format_double(r.gains.pt())
           << ',' << to_string(r.objective) << ',' << to_string(r.bound) << ',' << format_double(r.allocation.w1)
           << ',' << format_double(r.allocation.w2) << ',' << format_double(r.r1) << ',' << format_double(r.r2)
           << ',' << (r.feasible ? 1 : 0) << '\n';
}

} // namespace otfs_isac
