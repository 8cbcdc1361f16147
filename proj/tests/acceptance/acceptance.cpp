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

// Acceptance suite: one PASS/FAIL line per criterion with its runtime and
// the numbers behind the verdict. Exit status is non-zero if any criterion
// fails. Optional argv[1]: path of the simulate executable, used for the
// two-run reproducibility check.

#include "otfs_isac/array_geometry.hpp"
#include "otfs_isac/channel.hpp"
#include "otfs_isac/dd_signal.hpp"
#include "otfs_isac/noma_alloc.hpp"
#include "otfs_isac/sensing.hpp"
#include "otfs_isac/sim/config.hpp"
#include "otfs_isac/sim/harness.hpp"
#include "otfs_isac/sim/tracking.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

using namespace otfs_isac;
using namespace otfs_isac::sim;

namespace {

struct Verdict {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            notes.push_back("FAILED: " + what);
        }
    }
    void note(const std::string& s) { notes.push_back(s); }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double max_abs(const Eigen::MatrixXcd& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

// ---- 1 -------------------------------------------------------------------

Verdict transforms()
{
    Verdict v;
    Rng rng(101);
    const FrameTiming timing = FrameTiming::from_symbol_duration(1e-6);
    double round_trip = 0.0, unitary = 0.0, direct = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const DdGrid x(32, 32, oracle::random_matrix(32, 32, rng));
        const DdGrid y(32, 32, oracle::random_matrix(32, 32, rng));
        round_trip = std::max(round_trip, max_abs(demodulate(modulate(x, timing)).data() - x.data()));

        // Unitary: inner products survive each of the four maps.
        const cplx ip = x.data().cwiseProduct(y.data().conjugate()).sum();
        const TfGrid tx = isfft(x, timing);
        const TfGrid ty = isfft(y, timing);
        const TimeSeries sx = heisenberg(tx);
        const TimeSeries sy = heisenberg(ty);
        const cplx ip_tf = tx.data().cwiseProduct(ty.data().conjugate()).sum();
        const cplx ip_t = sx.samples().dot(sy.samples());
        const TfGrid wx = wigner(sx);
        const TfGrid wy = wigner(sy);
        const cplx ip_w = wx.data().cwiseProduct(wy.data().conjugate()).sum();
        const DdGrid dx = sfft(wx);
        const DdGrid dy = sfft(wy);
        const cplx ip_dd = dx.data().cwiseProduct(dy.data().conjugate()).sum();
        for (cplx got : {ip_tf, std::conj(ip_t), ip_w, ip_dd})
            unitary = std::max(unitary, std::abs(got - ip) / std::max(1.0, std::abs(ip)));
        for (const auto* g : {&x, &y}) {
            const double e = g->energy();
            unitary = std::max(unitary, std::abs(isfft(*g, timing).energy() - e) / e);
            unitary = std::max(unitary, std::abs(heisenberg(isfft(*g, timing)).energy() - e) / e);
        }
    }
    for (auto [m, n] : {std::pair{16, 16}, std::pair{8, 16}, std::pair{16, 4}}) {
        const Eigen::MatrixXcd a = oracle::random_matrix(n, m, rng);
        const DdGrid dd(std::size_t(m), std::size_t(n), a);
        const TfGrid tf = isfft(dd, timing);
        direct = std::max(direct, max_abs(tf.data() - oracle::isfft(a)));
        direct = std::max(direct, max_abs(sfft(tf).data() - oracle::sfft(tf.data())));
        const TimeSeries ts = heisenberg(tf);
        direct = std::max(direct, max_abs(ts.samples() - oracle::heisenberg(tf.data(), timing.symbol_duration_s())));
        direct = std::max(direct, max_abs(wigner(ts).data() -
                                          oracle::wigner(ts.samples(), m, timing.symbol_duration_s())));
    }
    v.note(fmt("round trip %.2e, unitarity %.2e, direct-sum oracle %.2e", round_trip, unitary, direct));
    v.require(round_trip < 1e-9, "demodulate(modulate(x)) == x within 1e-9");
    v.require(unitary < 1e-9, "all four transforms unitary within 1e-9");
    v.require(direct < 1e-12, "direct-summation agreement within 1e-12");
    return v;
}

// ---- 2 -------------------------------------------------------------------

Verdict sensing_exactness()
{
    Verdict v;
    const TimeSeries tx = modulate(pilot_frame(64, 64, 64.0 * 64.0), FrameTiming::from_symbol_duration(1e-6));
    const FrameLayout l = tx.layout();
    Rng rng(202);
    std::uniform_int_distribution<int> delay(0, 40), doppler(-20, 20), nlos_count(1, 3);
    int frames = 0, misplaced = 0;
    double worst_e = 0.0;
    for (double e : {0.0, 0.02, 0.04, 0.1}) {
        for (int trial = 0; trial < 25; ++trial) {
            const Path los{std::polar(1.0, 0.3 * trial), double(delay(rng)) * l.delay_bin_s(),
                           double(doppler(rng)) * l.doppler_bin_hz(), {}, true};
            std::vector<Path> paths{los};
            if (e > 0.0) {
                const auto nlos = draw_nlos_paths(e, los, std::size_t(nlos_count(rng)), l, rng);
                paths.insert(paths.end(), nlos.begin(), nlos.end());
            }
            const PathSet set(paths);
            Rng unused(0);
            const MfMap map = matched_filter_map(apply_comm_channel(tx, set, {}, {1, 1}, 0.0, unused), tx);

            // The K strongest local maxima must sit exactly on the K true cells.
            auto det = detect_peaks(map, 1e-6);
            std::stable_sort(det.begin(), det.end(),
                             [](const Detection& a, const Detection& b) { return a.magnitude > b.magnitude; });
            if (det.size() < paths.size()) {
                ++misplaced;
                continue;
            }
            det.resize(paths.size());
            for (auto& d : det)
                d.is_los = false;
            det.front().is_los = true;
            bool all_found = true;
            for (const Path& p : paths) {
                const auto db = std::size_t(std::llround(p.delay_s / l.delay_bin_s()));
                const long kb = std::lround(p.doppler_hz / l.doppler_bin_hz());
                all_found &= std::any_of(det.begin(), det.end(), [&](const Detection& d) {
                    return d.delay_bin == db && d.doppler_bin == kb;
                });
            }
            misplaced += all_found ? 0 : 1;
            worst_e = std::max(worst_e, std::abs(estimate_nlos_strength(det).e_hat - set.nlos_strength()));
            ++frames;
        }
    }
    v.note(fmt("%.0f frames, %.0f with a misplaced peak, worst |e_hat - e| = %.2e", frames, misplaced, worst_e));
    v.require(misplaced == 0, "every matched-filter maximum at its true bin");
    v.require(worst_e <= 0.005, "e_hat within 0.005 of the true NLOS strength");
    return v;
}

// ---- 3 -------------------------------------------------------------------

Verdict music()
{
    Verdict v;
    const UpaConfig arrays{8, 8};
    const auto el = Eigen::Index(arrays.elements());
    const double noise = db_to_linear(-20.0);
    Rng rng(303);
    std::uniform_real_distribution<double> az(-1.2, 1.2), elev(0.15, 1.4);
    int hits = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Direction truth(az(rng), elev(rng));
        const Eigen::VectorXcd a = steering(arrays, truth) * std::sqrt(double(el));
        Eigen::MatrixXcd x(el, 64);
        for (Eigen::Index t = 0; t < 64; ++t) {
            x.col(t) = a * complex_gaussian(rng, 1.0);
            for (Eigen::Index i = 0; i < el; ++i)
                x(i, t) += complex_gaussian(rng, noise);
        }
        const auto est = estimate_angles(x, 1, arrays, AngleGrid{});
        if (est.empty())
            continue;
        const double err = std::max(std::abs(est[0].azimuth() - truth.azimuth()),
                                    std::abs(est[0].elevation() - truth.elevation()));
        worst = std::max(worst, err);
        hits += err <= 0.01 + 1e-12 ? 1 : 0;
    }
    v.note(fmt("%.0f / 100 trials within 0.01 rad (worst %.4f rad)", hits, worst));
    v.require(hits >= 95, "at least 95 of 100 trials within one grid cell");
    return v;
}

// ---- 4 -------------------------------------------------------------------

Verdict tracking()
{
    Verdict v;
    ScenarioConfig scenario = default_config();
    apply_desk_scale(scenario);
    const TrackingConfig cfg;
    const TrackingResult r = run_tracking(scenario, cfg);
    v.note(fmt("raw %.3f %%, smoothed %.3f %%, %.0f missed looks over %.0f", r.raw_error_pct,
               r.smoothed_error_pct, double(r.missed_looks), double(cfg.slots)));
    v.require(r.smoothed_error_pct <= 3.0, "smoothed mean range error <= 3 %");
    return v;
}

// ---- 5 -------------------------------------------------------------------

Verdict closed_forms()
{
    Verdict v;
    std::mt19937_64 rng(505);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const QosSpec qos{0.5, 0.0};
    constexpr std::size_t steps = 100000;
    double mmf_gap = 0.0, mmf_worse = 0.0;
    int mmf_coarse = 0, mmf_unresolved = 0;
    double sr_gap = 0.0, sr_upper_gap = 0.0, equal_rate = 0.0;
    int sr_feasibility_mismatch = 0, regime = 0, sr_upper_bad = 0, mmf_upper_diverged = 0;
    double mmf_upper_worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double pt = 1.0;
        const double h1 = std::pow(10.0, -2.0 + 2.0 * u(rng));
        const double h2 = h1 * std::pow(10.0, 2.0 * u(rng));
        const double n0 = pt * h1 * std::pow(10.0, -4.0 + 4.0 * u(rng));
        const double e = 0.1 * u(rng);
        const ChannelGains g(h1, h2, e, n0, pt);

        const RateReport mp = mmf_perfect(g);
        const PowerAllocation ma = grid_oracle(g, Objective::mmf, {}, Bound::perfect, steps);
        const double grid_best = rates_perfect(g, ma).min();
        // How far the objective moves across one grid step around the grid optimum.
        double modulus = 0.0;
        for (double dw : {-pt / steps, pt / steps}) {
            const double w = std::clamp(ma.w2 + dw, 0.0, pt);
            modulus = std::max(modulus, std::abs(rates_perfect(g, {pt - w, w}).min() - grid_best));
        }
        const double signed_gap = mp.value() - grid_best;
        mmf_gap = std::max(mmf_gap, std::abs(signed_gap));
        mmf_worse = std::max(mmf_worse, -signed_gap);
        mmf_unresolved += signed_gap > 1e-4 && signed_gap > modulus ? 1 : 0;
        mmf_coarse += signed_gap > 1e-4 ? 1 : 0;

        const RateReport sp = sr_perfect(g, qos);
        std::optional<Rates> so;
        try {
            so = rates_perfect(g, grid_oracle(g, Objective::sr, qos, Bound::perfect, steps));
        } catch (const std::domain_error&) {
        }
        if (sp.feasible != so.has_value())
            ++sr_feasibility_mismatch;
        else if (so)
            sr_gap = std::max(sr_gap, std::abs(sp.value() - so->sum()));

        const RateReport mu = mmf_imperfect(g, Bound::upper, steps);
        if (mu.diverged) {
            ++mmf_upper_diverged;
            if (mu.closed_form && mu.oracle)
                mmf_upper_worst = std::max(mmf_upper_worst,
                                           rates_bound(g, *mu.oracle, Bound::upper).min() -
                                               rates_bound(g, *mu.closed_form, Bound::upper).min());
        }

        if (n0 / h1 > 1e-3 * pt)
            continue;
        ++regime;
        // The literal root against the unconstrained optimum of the upper-bound sum rate.
        const double w2 = pt * (std::sqrt(e * e + 1.0) - e);
        const double root = rates_bound(g, {pt - w2, w2}, Bound::upper).sum();
        const double best = rates_bound(g, grid_oracle(g, Objective::sr, {}, Bound::upper, steps), Bound::upper).sum();
        sr_upper_gap = std::max(sr_upper_gap, best - root);
        sr_upper_bad += best - root > 1e-3 ? 1 : 0;

        const RateReport ml = mmf_imperfect(g, Bound::lower);
        equal_rate = std::max(equal_rate, std::abs(ml.r1 - ml.r2));
    }
    v.note(fmt("mmf_perfect max |gap| %.2e (closed form worse by at most %.2e), sr_perfect max gap %.2e bits/s/Hz",
               mmf_gap, std::max(mmf_worse, 0.0), sr_gap));
    v.note(fmt("mmf_perfect beats the grid by > 1e-4 in %.0f instances; %.0f of them exceed the objective's "
               "change across one grid step",
               mmf_coarse, mmf_unresolved));
    v.note(fmt("%.0f instances with n0/h^2 <= 1e-3 pt: sr upper root worse by > 1e-3 in %.0f (max %.4f), "
               "mmf lower |r1 - r2| max %.2e",
               regime, sr_upper_bad, sr_upper_gap, equal_rate));
    v.note(fmt("logged: literal mmf upper root diverged in %.0f / 1000 instances (max objective gap %.4f)",
               mmf_upper_diverged, mmf_upper_worst));
    v.require(mmf_gap <= 1e-4, "mmf_perfect matches the grid oracle within 1e-4");
    v.require(mmf_worse <= 1e-4 && mmf_unresolved == 0,
              "mmf_perfect never below the grid optimum, and above it only by the grid resolution");
    v.require(sr_gap <= 1e-4 && sr_feasibility_mismatch == 0, "sr_perfect matches the grid oracle within 1e-4");
    v.require(sr_upper_bad == 0, "sr upper root within 1e-3 of the oracle optimum");
    v.require(equal_rate <= 1e-6, "mmf lower equal-rate property within 1e-6");
    return v;
}

// ---- 6 -------------------------------------------------------------------

Verdict structural()
{
    Verdict v;
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double e0 = 0.0;
    int sandwich = 0;
    double active = 0.0, equal = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const double h1 = std::pow(10.0, -2.0 + 2.0 * u(rng));
        const double h2 = h1 * std::pow(10.0, 2.0 * u(rng));
        const double n0 = h1 * std::pow(10.0, -4.0 + 4.0 * u(rng));
        const double w2 = u(rng);
        const PowerAllocation a{1.0 - w2, w2};
        const ChannelGains g0(h1, h2, 0.0, n0, 1.0);
        const Rates p = rates_perfect(g0, a);
        for (Bound b : {Bound::lower, Bound::upper}) {
            const Rates r = rates_bound(g0, a, b);
            e0 = std::max({e0, std::abs(r.r1 - p.r1), std::abs(r.r2 - p.r2)});
        }
        const ChannelGains g(h1, h2, 0.001 + 0.099 * u(rng), n0, 1.0);
        const Rates lo = rates_bound(g, a, Bound::lower);
        const Rates up = rates_bound(g, a, Bound::upper);
        sandwich += lo.r1 <= up.r1 && lo.r2 <= up.r2 ? 0 : 1;

        const RateReport sr = sr_perfect(g0, {0.5, 0.0});
        if (sr.feasible)
            active = std::max(active, std::abs(sr.r1 - 0.5));
        const RateReport mmf = mmf_perfect(g0);
        equal = std::max(equal, std::abs(mmf.r1 - mmf.r2));
    }
    v.note(fmt("e = 0 bound gap %.2e, sandwich violations %.0f, |r1 - 0.5| %.2e, mmf |r1 - r2| %.2e", e0, sandwich,
               active, equal));
    v.require(e0 <= 1e-12, "e = 0: upper = lower = perfect within 1e-12");
    v.require(sandwich == 0, "lower <= upper for e > 0");
    v.require(active <= 1e-9, "sr_perfect hits r1 = 0.5");
    v.require(equal <= 1e-9, "mmf_perfect gives r1 = r2");
    return v;
}

// ---- 7 -------------------------------------------------------------------

ScenarioConfig desk_base()
{
    ScenarioConfig cfg = default_config();
    apply_desk_scale(cfg);
    cfg.sweep.trials = 200;
    cfg.sweep.seed = 7;
    return cfg;
}

using Key = std::tuple<double, double, double, SystemVariant, Objective, Bound>;

std::map<Key, double> means(const std::vector<TrialResult>& rows)
{
    std::map<Key, double> out;
    for (const MeanRate& m : mean_rates(rows))
        out[{m.snr_db, m.e, m.speed_kmh.value_or(-1.0), m.variant, m.objective, m.bound}] = m.rate;
    return out;
}

Verdict system_level()
{
    Verdict v;
    const ScenarioConfig base = desk_base();

    // Orderings over the SNR sweep at e = 0.
    const auto snr_rows = run_sweep(figure_preset(base, 5));
    {
        const auto m = means(snr_rows);
        int violations = 0, checked = 0;
        for (double snr : figure_preset(base, 5).sweep.snr_db)
            for (Objective o : {Objective::mmf, Objective::sr})
                for (Bound b : {Bound::perfect, Bound::lower, Bound::upper}) {
                    const double isac = m.at({snr, 0.0, -1.0, SystemVariant::noma_isac, o, b});
                    const double stale = m.at({snr, 0.0, -1.0, SystemVariant::noma_no_sensing, o, b});
                    const double oma = m.at({snr, 0.0, -1.0, SystemVariant::oma_no_sensing, o, b});
                    if (b == Bound::lower)
                        v.note("  " + std::string(to_string(o)) +
                               fmt(" lower, snr %2.0f dB: isac %.4f, no-sensing %.4f, oma %.4f", snr, isac, stale, oma));
                    if (snr < 10.0)
                        continue;
                    ++checked;
                    if (!(isac >= stale && stale >= oma)) {
                        ++violations;
                        v.note("  " + std::string(to_string(o)) + " " + std::string(to_string(b)) +
                               fmt(" ordering broken at %.0f dB: %.5f %.5f %.5f", snr, isac, stale, oma));
                    }
                }
        v.require(violations == 0, "noma_isac >= noma_no_sensing >= oma_no_sensing at every SNR >= 10 dB (" +
                                       std::to_string(checked) + " comparisons)");
    }

    // Monotonicity in e at 20 dB.
    const ScenarioConfig e_cfg = figure_preset(base, 7);
    const auto e_rows = run_sweep(e_cfg);
    {
        const auto m = means(e_rows);
        int violations = 0;
        for (SystemVariant sv : kAllVariants)
            for (Objective o : {Objective::mmf, Objective::sr})
                for (Bound b : {Bound::lower, Bound::upper}) {
                    std::string line = "  " + std::string(to_string(sv)) + " " + std::string(to_string(o)) + " " +
                                       std::string(to_string(b)) + ":";
                    double prev = std::numeric_limits<double>::infinity();
                    bool mono = true;
                    for (double e : e_cfg.sweep.e) {
                        const double r = m.at({20.0, e, -1.0, sv, o, b});
                        line += fmt(" %.4f", r);
                        mono &= r <= prev + 1e-12;
                        prev = r;
                    }
                    if (b == Bound::lower) {
                        violations += mono ? 0 : 1;
                        v.note(line + (mono ? "" : "  <- not monotone"));
                    } else {
                        v.note(line + (mono ? "  (info)" : "  (info, not monotone)"));
                    }
                }
        v.require(violations == 0, "lower-bound mean rates non-increasing in e for every variant and objective");
    }

    // SR sum >= MMF sum per instance on the e sweep; the SNR sweep is
    // reported too, where 0 dB sensing failures can invert it.
    const auto sr_vs_mmf = [](const std::vector<TrialResult>& rows, std::size_t& compared, std::size_t& skipped) {
        std::map<std::tuple<double, double, std::size_t, SystemVariant, Bound>, std::pair<double, double>> sums;
        for (const TrialResult& r : rows) {
            auto& s = sums[{r.snr_db, r.e, r.trial, r.variant, r.bound}];
            if (r.objective == Objective::mmf)
                s.first = r.r1 + r.r2;
            else
                s.second = r.feasible ? r.r1 + r.r2 : std::numeric_limits<double>::quiet_NaN();
        }
        std::size_t bad = 0;
        compared = skipped = 0;
        for (const auto& [k, s] : sums) {
            if (std::isnan(s.second)) {
                ++skipped;
                continue;
            }
            ++compared;
            bad += s.second >= s.first - 1e-12 ? 0 : 1;
        }
        return bad;
    };
    {
        std::size_t compared = 0, skipped = 0;
        const std::size_t bad = sr_vs_mmf(e_rows, compared, skipped);
        v.note(fmt("SR vs MMF sum over the e sweep: %.0f instances, %.0f violations, %.0f with infeasible QoS skipped",
                   double(compared), double(bad), double(skipped)));
        v.require(bad == 0, "SR sum rate >= MMF sum rate per instance");
        const std::size_t info = sr_vs_mmf(snr_rows, compared, skipped);
        v.note(fmt("  (info) SNR sweep: %.0f violations in %.0f instances", double(info), double(compared)));
    }

    // Speed degradation at e = 0.02, 20 dB.
    {
        const auto m = means(run_sweep(figure_preset(base, 9)));
        for (Objective o : {Objective::mmf, Objective::sr}) {
            const auto deg = [&](SystemVariant sv) {
                return m.at({20.0, 0.02, 30.0, sv, o, Bound::lower}) - m.at({20.0, 0.02, 60.0, sv, o, Bound::lower});
            };
            const double isac = deg(SystemVariant::noma_isac);
            const double stale = deg(SystemVariant::noma_no_sensing);
            v.note(std::string(to_string(o)) +
                   fmt(" rate loss 30 -> 60 km/h (lower bound): no-sensing %.6f, isac %.6f", stale, isac));
            v.require(stale > isac, std::string(to_string(o)) + ": 60 km/h degrades noma_no_sensing more than noma_isac");
        }
    }
    return v;
}

// ---- 8 -------------------------------------------------------------------

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Verdict reproducibility(const char* simulate)
{
    Verdict v;
    const auto root = std::filesystem::temp_directory_path() / "otfs_isac_acceptance";
    std::filesystem::remove_all(root);
    std::filesystem::create_directories(root);
    std::string a, b;
    if (simulate) {
        for (const char* run : {"a", "b"}) {
            const std::string cmd = std::string("\"") + simulate + "\" --figure 9 --trials 20 --seed 42 --quiet --out \"" +
                                    (root / run).string() + "\" > \"" + (root / run).string() + ".log\"";
            v.require(std::system(cmd.c_str()) == 0, std::string("simulate run ") + run + " exits with 0");
        }
        a = slurp(root / "a" / "results.csv");
        b = slurp(root / "b" / "results.csv");
        v.note("two runs of simulate --figure 9 --trials 20 --seed 42");
    } else {
        ScenarioConfig cfg = figure_preset(desk_base(), 9);
        cfg.sweep.trials = 20;
        emit_csv(run_sweep(cfg), root / "a.csv");
        emit_csv(run_sweep(cfg), root / "b.csv");
        a = slurp(root / "a.csv");
        b = slurp(root / "b.csv");
        v.note("two in-process sweeps (no simulate path given)");
    }
    v.note(fmt("results.csv: %.0f bytes", double(a.size())));
    v.require(!a.empty() && a == b, "byte-identical results.csv");
    std::filesystem::remove_all(root);
    return v;
}

} // namespace

int main(int argc, char** argv)
{
    const char* simulate = argc > 1 ? argv[1] : nullptr;
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
        {"transform identities", transforms},
        {"sensing exactness", sensing_exactness},
        {"MUSIC single source", music},
        {"tracking", tracking},
        {"closed forms vs grid oracle", closed_forms},
        {"structural rate properties", structural},
        {"system-level orderings", system_level},
        {"reproducibility", [simulate] { return reproducibility(simulate); }},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %zu %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), secs);
        for (const auto& n : v.notes)
            std::printf("       %s\n", n.c_str());
        std::fflush(stdout);
        failed += v.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
