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

#include "otfs_isac/sim/harness.hpp"

#include "format.hpp"
#include "otfs_isac/motion.hpp"
#include "otfs_isac/sim/radar_link.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>
#include <tuple>

namespace otfs_isac::sim {
namespace {

using detail::format_double;

// Both streams are keyed on the trial only: every sweep point of a trial
// sees the same users and the same noise / NLOS draws (common random
// numbers), so differences between points are not masked by resampling.
constexpr std::uint64_t kGeometryStream = 0x67656f6d65747279ULL;
constexpr std::uint64_t kNoiseStream = 0x6e6f697365ULL;

struct UserMotion {
    Vec3 start = Vec3::Zero();  // position at t = 0, the last sensing slot
    double speed = 0.0;         // m/s
    double heading = 0.0;

    MotionState at(double t) const
    {
        const Vec3 v = speed * Vec3(std::cos(heading), std::sin(heading), 0.0);
        return MotionState(start + v * t, speed, heading);
    }
};

// Geometry depends on (seed, trial) only, so every sweep point sees the
// same users and differences between points are not masked by geometry noise.
std::array<UserMotion, 2> draw_users(const ScenarioConfig& cfg, std::size_t trial, std::optional<double> speed_kmh)
{
    Rng g(mix_seed(cfg.sweep.seed, kGeometryStream, trial));
    std::uniform_real_distribution<double> bearing(-cfg.users.max_bearing_rad, cfg.users.max_bearing_rad);
    std::uniform_real_distribution<double> heading(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> speed(cfg.users.speed_min_kmh, cfg.users.speed_max_kmh);

    std::array<UserMotion, 2> users;
    const double h = cfg.users.uav_altitude_m;
    for (std::size_t p = 0; p < 2; ++p) {
        const double d = p == 0 ? cfg.users.d1_m : cfg.users.d2_m;
        const double rho = std::sqrt(d * d - h * h);
        const double b = bearing(g);
        users[p].heading = heading(g);
        const double drawn = speed(g);
        users[p].speed = speed_kmh.value_or(drawn) / 3.6;
        users[p].start = Vec3(rho * std::cos(b), rho * std::sin(b), -h);
    }
    return users;
}

struct SensedUser {
    Vec3 predicted = Vec3::Zero();  // position estimate at the transmission time
    double e_hat = 0.0;
    double tau = 0.0;
    double nu = 0.0;
};

SensedUser track_user(const UserMotion& user, const ScenarioConfig& cfg, const RadarSetup& setup,
                      const TimeSeries& pilot_tx, double e_radar, double t_tx, Rng& rng)
{
    const std::size_t slots = cfg.users.history_slots;
    const double dt = cfg.users.estimation_interval_s;
    auto slot_time = [&](std::size_t j) { return -static_cast<double>(slots - 1 - j) * dt; };

    Track est;
    double e_sum = 0.0;
    SensedUser out;
    // The first look is pointed with the true direction; afterwards the beam
    // follows the constant-velocity prediction from the estimates so far.
    Direction beam = user.at(slot_time(0)).direction();
    for (std::size_t j = 0; j < slots; ++j) {
        const double t = slot_time(j);
        const TimeSeries tx = setup.waveform == SensingWaveform::pilot ? pilot_tx : sensing_frame(setup, rng);
        const RadarObservation obs = sense_user(user.at(t), beam, tx, setup, e_radar, rng);
        if (obs.valid) {
            est.push_back({t, obs.position});
            e_sum += obs.e_hat;
            out.tau = obs.los_delay_s;
            out.nu = obs.los_doppler_hz;
        }
        if (j + 1 < slots && !est.empty())
            beam = direction_of(fit_constant_velocity(est, slots).at(slot_time(j + 1)));
    }
    if (est.empty()) {
        out.predicted = user.at(slot_time(0)).position();
        return out;
    }
    out.predicted = fit_constant_velocity(est, slots).at(t_tx);
    out.e_hat = e_sum / static_cast<double>(est.size());
    return out;
}

struct Coordinates {
    double snr_db;
    double e;
    std::optional<double> speed_kmh;
};

RateReport allocate(const ChannelGains& g, Objective o, Bound b, const QosSpec& q, std::size_t steps)
{
    if (o == Objective::mmf)
        return b == Bound::perfect ? mmf_perfect(g) : mmf_imperfect(g, b, steps);
    return b == Bound::perfect ? sr_perfect(g, q) : sr_imperfect(g, q, b, steps);
}

// Evaluates an allocation planned on `planned` gains against the true
// channel. Powers follow the users, not the weak/strong labels.
Rates realized_rates(const RateReport& plan, const ChannelGains& planned, const ChannelGains& truth, Bound b)
{
    const std::size_t weak_planned = planned.swapped() ? 1 : 0;
    const std::size_t weak_true = truth.swapped() ? 1 : 0;
    std::array<double, 2> power{};
    power[weak_planned] = plan.allocation.w1;
    power[1 - weak_planned] = plan.allocation.w2;
    return rates_bound(truth, {power[weak_true], power[1 - weak_true]}, b);
}

double oma_rate(double h_sq, double e, double pt, double n0, Bound b)
{
    double sinr = 0.0;
    switch (b) {
    case Bound::perfect: sinr = pt * h_sq / n0; break;
    case Bound::lower: sinr = pt * h_sq / (pt * e * h_sq + n0); break;
    case Bound::upper: sinr = pt * (1.0 + e) * h_sq / n0; break;
    }
    return 0.5 * std::log2(1.0 + sinr);
}

std::vector<TrialResult> run_trial(const ScenarioConfig& cfg, const RunOptions& opt, const Coordinates& at,
                                   std::size_t trial, const TimeSeries& pilot_tx)
{
    const double pt = cfg.link.pt_w;
    const LinkBudget reference = cfg.budget(1.0);
    const double h_ref = path_loss(reference, cfg.users.d2_m);
    const double n0 = pt * h_ref * h_ref / db_to_linear(at.snr_db);
    const LinkBudget budget = cfg.budget(n0);
    const double t_tx = cfg.csi_age_s();
    const double overhead = cfg.frame.overhead_multiplier();

    const auto users = draw_users(cfg, trial, at.speed_kmh);
    std::array<double, 2> d_true{}, d_stale{};
    for (std::size_t p = 0; p < 2; ++p) {
        d_true[p] = users[p].at(t_tx).range();
        d_stale[p] = users[p].at(0.0).range();
    }
    auto gains_at = [&](const std::array<double, 2>& d, double e) {
        const double h0 = path_loss(budget, d[0]);
        const double h1 = path_loss(budget, d[1]);
        return ChannelGains(h0 * h0, h1 * h1, e, n0, pt);
    };
    auto range_error = [&](const std::array<double, 2>& d) {
        return 50.0 * (std::abs(d[0] - d_true[0]) / d_true[0] + std::abs(d[1] - d_true[1]) / d_true[1]);
    };
    const ChannelGains truth = gains_at(d_true, at.e);

    std::vector<TrialResult> rows;
    auto base_row = [&](SystemVariant v, Objective o, Bound b) {
        TrialResult r;
        r.experiment = opt.experiment;
        r.snr_db = at.snr_db;
        r.e = at.e;
        r.speed_kmh = at.speed_kmh;
        r.trial = trial;
        r.variant = v;
        r.objective = o;
        r.bound = b;
        return r;
    };

    for (SystemVariant v : opt.variants) {
        ChannelGains planned = truth;
        double multiplier = overhead;
        double err = range_error(d_stale);
        double tau = 0.0, nu = 0.0, e_hat = 0.0;

        if (v == SystemVariant::noma_isac) {
            multiplier = 1.0;
            if (cfg.sweep.perfect_csi) {
                err = 0.0;
            } else {
                Rng rng(mix_seed(cfg.sweep.seed, kNoiseStream, trial));
                const RadarSetup setup = RadarSetup::from_config(cfg, n0);
                const double e_radar = at.e * cfg.nlos.radar_e_scale;
                std::array<double, 2> d_est{};
                for (std::size_t p = 0; p < 2; ++p) {
                    const SensedUser s = track_user(users[p], cfg, setup, pilot_tx, e_radar, t_tx, rng);
                    d_est[p] = s.predicted.norm();
                    e_hat += 0.5 * s.e_hat;
                    if (p == 0) {
                        tau = s.tau;
                        nu = s.nu;
                    }
                }
                planned = gains_at(d_est, e_hat);
                err = range_error(d_est);
            }
        } else if (v == SystemVariant::noma_no_sensing) {
            planned = gains_at(d_stale, at.e);
        }

        for (Objective o : {Objective::mmf, Objective::sr})
            for (Bound b : {Bound::perfect, Bound::lower, Bound::upper}) {
                TrialResult r = base_row(v, o, b);
                r.range_error_pct = err;
                r.tau_hat_s = tau;
                r.nu_hat_hz = nu;
                r.e_hat = e_hat;
                if (v == SystemVariant::oma_no_sensing) {
                    r.w1 = r.w2 = pt;
                    r.r1 = oma_rate(truth.h1_sq(), at.e, pt, n0, b);
                    r.r2 = oma_rate(truth.h2_sq(), at.e, pt, n0, b);
                    if (o == Objective::sr)
                        r.feasible = r.r1 >= cfg.qos.r1_min && r.r2 >= cfg.qos.r2_min;
                } else {
                    const RateReport plan = allocate(planned, o, b, cfg.qos, cfg.sweep.oracle_steps);
                    r.feasible = plan.feasible;
                    r.diverged = plan.diverged;
                    if (plan.feasible) {
                        r.w1 = plan.allocation.w1;
                        r.w2 = plan.allocation.w2;
                        const Rates got = realized_rates(plan, planned, truth, b);
                        r.r1 = got.r1;
                        r.r2 = got.r2;
                    }
                }
                r.r1 *= multiplier;
                r.r2 *= multiplier;
                rows.push_back(std::move(r));
            }
    }
    return rows;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + '"';
}

auto sort_key(const TrialResult& r)
{
    return std::make_tuple(std::cref(r.experiment), r.snr_db, r.e, r.speed_kmh.has_value(), r.speed_kmh.value_or(0.0),
                           r.trial, static_cast<int>(r.variant), static_cast<int>(r.objective),
                           static_cast<int>(r.bound));
}

} // namespace

std::string_view to_string(SystemVariant v)
{
    switch (v) {
    case SystemVariant::noma_isac: return "noma_isac";
    case SystemVariant::noma_no_sensing: return "noma_no_sensing";
    case SystemVariant::oma_no_sensing: return "oma_no_sensing";
    }
    return "?";
}

SystemVariant variant_from_string(std::string_view name)
{
    for (SystemVariant v : kAllVariants)
        if (to_string(v) == name)
            return v;
    throw std::invalid_argument("unknown system variant '" + std::string(name) + "'");
}

void sort_results(std::vector<TrialResult>& results)
{
    std::stable_sort(results.begin(), results.end(),
                     [](const TrialResult& a, const TrialResult& b) { return sort_key(a) < sort_key(b); });
}

std::vector<TrialResult> run_sweep(const ScenarioConfig& cfg, const RunOptions& options)
{
    validate(cfg);
    if (options.variants.empty())
        throw std::invalid_argument("run_sweep: no system variant selected");

    std::vector<std::optional<double>> speeds;
    if (cfg.sweep.speed_kmh.empty())
        speeds.emplace_back();
    else
        speeds.assign(cfg.sweep.speed_kmh.begin(), cfg.sweep.speed_kmh.end());

    std::vector<Coordinates> points;
    for (double snr : cfg.sweep.snr_db)
        for (double e : cfg.sweep.e)
            for (const auto& s : speeds)
                points.push_back({snr, e, s});

    Rng unused(0);
    const TimeSeries pilot_tx = sensing_frame(RadarSetup::from_config(cfg, 1.0), unused);

    const std::size_t trials = cfg.sweep.trials;
    const std::size_t total = points.size() * trials;
    std::vector<std::vector<TrialResult>> slots(total);
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::mutex progress_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t job = next.fetch_add(1);
            if (job >= total)
                return;
            const std::size_t pi = job / trials;
            const std::size_t trial = job % trials;
            try {
                slots[job] = run_trial(cfg, options, points[pi], trial, pilot_tx);
            } catch (const std::exception& e) {
                const Coordinates& c = points[pi];
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::make_exception_ptr(std::runtime_error(
                        "trial " + std::to_string(trial) + " at snr_db=" + format_double(c.snr_db) +
                        " e=" + format_double(c.e) +
                        (c.speed_kmh ? " speed_kmh=" + format_double(*c.speed_kmh) : std::string()) + ": " + e.what()));
                next = total;
                return;
            }
            const std::size_t finished = ++done;
            if (options.progress) {
                std::lock_guard lock(progress_mutex);
                options.progress(finished, total);
            }
        }
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>({hw, 8, total});
    std::vector<std::thread> pool;
    for (std::size_t i = 1; i < workers; ++i)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);

    std::vector<TrialResult> results;
    results.reserve(total * options.variants.size() * 6);
    for (auto& s : slots)
        std::move(s.begin(), s.end(), std::back_inserter(results));
    sort_results(results);
    return results;
}

void write_results_csv(std::ostream& os, const std::vector<TrialResult>& results)
{
    os << "experiment,snr_db,e,speed_kmh,trial,variant,objective,bound,r1,r2,rate,w1,w2,feasible,diverged,"
          "range_error_pct,tau_hat_s,nu_hat_hz,e_hat\n";
    for (const TrialResult& r : results)
        os << csv_field(r.experiment) << ',' << format_double(r.snr_db) << ',' << format_double(r.e) << ','
           << (r.speed_kmh ? format_double(*r.speed_kmh) : std::string()) << ',' << r.trial << ','
           << to_string(r.variant) << ',' << to_string(r.objective) << ',' << to_string(r.bound) << ','
           << format_double(r.r1) << ',' << format_double(r.r2) << ',' << format_double(r.rate()) << ','
           << format_double(r.w1) << ',' << format_double(r.w2) << ',' << (r.feasible ? 1 : 0) << ','
           << (r.diverged ? 1 : 0) << ',' << format_double(r.range_error_pct) << ',' << format_double(r.tau_hat_s)
           << ',' << format_double(r.nu_hat_hz) << ',' << format_double(r.e_hat) << '\n';
}

void emit_csv(const std::vector<TrialResult>& results, const std::filesystem::path& path)
{
    if (results.empty())
        throw std::runtime_error("emit_csv: no results to write");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    write_results_csv(out, results);
    if (!out)
        throw std::runtime_error("write to " + path.string() + " failed");
}

ScenarioConfig figure_preset(const ScenarioConfig& base, int figure)
{
    ScenarioConfig c = base;
    switch (figure) {
    case 5:
    case 6:
        c.sweep.e = {0.0};
        c.sweep.speed_kmh.clear();
        break;
    case 7:
    case 8: {
        c.sweep.snr_db = {20.0};
        c.sweep.e.clear();
        const auto steps = static_cast<std::size_t>(std::floor(base.nlos.e_max / 0.02 + 1e-9));
        for (std::size_t i = 0; i <= steps; ++i)
            c.sweep.e.push_back(base.nlos.e_min + 0.02 * static_cast<double>(i));
        c.sweep.speed_kmh.clear();
        break;
    }
    case 9:
        c.sweep.snr_db = {20.0};
        c.sweep.e = {0.02};
        c.sweep.speed_kmh = {30.0, 60.0};
        break;
    default:
        throw std::invalid_argument("no sweep preset for figure " + std::to_string(figure));
    }
    return c;
}

std::vector<MeanRate> mean_rates(const std::vector<TrialResult>& results)
{
    using Key = std::tuple<double, double, bool, double, int, int, int>;
    std::map<Key, MeanRate> groups;
    for (const TrialResult& r : results) {
        const Key k{r.snr_db, r.e, r.speed_kmh.has_value(), r.speed_kmh.value_or(0.0), static_cast<int>(r.variant),
                    static_cast<int>(r.objective), static_cast<int>(r.bound)};
        MeanRate& m = groups[k];
        m.snr_db = r.snr_db;
        m.e = r.e;
        m.speed_kmh = r.speed_kmh;
        m.variant = r.variant;
        m.objective = r.objective;
        m.bound = r.bound;
        m.rate += r.rate();
        m.r1 += r.r1;
        m.r2 += r.r2;
        ++m.count;
    }
    std::vector<MeanRate> out;
    for (auto& [k, m] : groups) {
        const double n = static_cast<double>(m.count);
        m.rate /= n;
        m.r1 /= n;
        m.r2 /= n;
        out.push_back(m);
    }
    return out;
}

} // namespace otfs_isac::sim
