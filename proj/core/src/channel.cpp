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

#include "otfs_isac/channel.hpp"

#include "format.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace otfs_isac {
namespace {

constexpr double kGridTolerance = 1e-6;  // in samples / bins

struct GridShift {
    std::size_t delay = 0;  // samples
    double doppler_hz = 0.0;
};

GridShift snap_to_grid(const Path& p, const FrameLayout& layout, OffGridPolicy policy)
{
    const double delay_samples = p.delay_s / layout.delay_bin_s();
    const double doppler_bins = p.doppler_hz / layout.doppler_bin_hz();
    const double d_round = std::round(delay_samples);
    const double k_round = std::round(doppler_bins);

    if (policy == OffGridPolicy::reject) {
        if (std::abs(delay_samples - d_round) > kGridTolerance)
            throw std::invalid_argument("path delay " + std::to_string(p.delay_s) +
                                        " s is not a whole number of samples");
        if (std::abs(doppler_bins - k_round) > kGridTolerance)
            throw std::invalid_argument("path Doppler " + std::to_string(p.doppler_hz) +
                                        " Hz is not a whole number of bins");
    }
    if (d_round < 0.0 || d_round >= static_cast<double>(layout.samples()))
        throw std::invalid_argument("path delay " + std::to_string(p.delay_s) + " s exceeds the frame length");
    if (std::abs(k_round) >= static_cast<double>(layout.n) / 2.0 + 0.5)
        throw std::invalid_argument("path Doppler " + std::to_string(p.doppler_hz) +
                                    " Hz is outside the unambiguous range");

    GridShift g;
    g.delay = static_cast<std::size_t>(d_round);
    g.doppler_hz = policy == OffGridPolicy::round ? k_round * layout.doppler_bin_hz() : p.doppler_hz;
    return g;
}

// x(t - D) exp(j 2 pi nu t), t = 0 .. L-1 samples, delay applied cyclically.
Eigen::VectorXcd shifted(const Eigen::VectorXcd& x, const GridShift& g, double dt)
{
    const auto len = x.size();
    Eigen::VectorXcd out(len);
    const double w = 2.0 * kPi * g.doppler_hz * dt;
    const auto delay = static_cast<Eigen::Index>(g.delay);
    for (Eigen::Index t = 0; t < len; ++t) {
        Eigen::Index src = t - delay;
        if (src < 0)
            src += len;
        // Phase from the integer index avoids drift from an accumulated rotation.
        const double ph = std::fmod(w * static_cast<double>(t), 2.0 * kPi);
        out(t) = x(src) * std::polar(1.0, ph);
    }
    return out;
}

void check_noise(double n0)
{
    if (!(n0 >= 0.0) || !std::isfinite(n0))
        throw std::invalid_argument("noise power must be non-negative and finite");
}

} // namespace

PathSet::PathSet(std::vector<Path> paths) : paths_(std::move(paths))
{
    if (paths_.empty())
        throw std::invalid_argument("path set needs a LOS path");
    if (!paths_.front().is_los)
        throw std::invalid_argument("the LOS path must come first");
    for (std::size_t i = 0; i < paths_.size(); ++i) {
        const Path& p = paths_[i];
        if (i > 0 && p.is_los)
            throw std::invalid_argument("path set holds more than one LOS path");
        if (!(p.delay_s >= 0.0) || !std::isfinite(p.delay_s))
            throw std::invalid_argument("path delay must be non-negative");
        if (!std::isfinite(p.doppler_hz) || !std::isfinite(p.gain.real()) || !std::isfinite(p.gain.imag()))
            throw std::invalid_argument("path parameters must be finite");
        if (i > 0 && p.delay_s < paths_.front().delay_s)
            throw std::invalid_argument("NLOS path arrives before the LOS path");
    }
}

const Path& PathSet::los() const
{
    if (paths_.empty())
        throw std::logic_error("empty path set");
    return paths_.front();
}

double PathSet::nlos_strength() const
{
    const double los_power = std::norm(los().gain);
    if (los_power == 0.0)
        throw std::domain_error("LOS gain is zero");
    double acc = 0.0;
    for (std::size_t i = 1; i < paths_.size(); ++i)
        acc += std::norm(paths_[i].gain);
    return acc / los_power;
}

void validate(const LinkBudget& b)
{
    auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    if (!positive(b.g_tx) || !positive(b.g_rx))
        throw std::invalid_argument("antenna gains must be positive");
    if (!positive(b.carrier_hz))
        throw std::invalid_argument("carrier frequency must be positive");
    if (!positive(b.noise_power_w))
        throw std::invalid_argument("noise power must be positive");
}

double path_loss(const LinkBudget& budget, double distance_m)
{
    if (!(distance_m > 0.0) || !std::isfinite(distance_m))
        throw std::invalid_argument("path_loss: distance must be positive");
    const double lambda = budget.wavelength_m();
    const double four_pi_d = 4.0 * kPi * distance_m;
    return budget.g_tx * budget.g_rx * lambda * lambda / (four_pi_d * four_pi_d);
}

Path los_path_from_kinematics(const MotionState& state, const LinkBudget& budget, bool round_trip,
                              double radar_cross_section)
{
    if (!(radar_cross_section > 0.0))
        throw std::invalid_argument("radar cross-section must be positive");
    const double d = state.range();
    const double h = path_loss(budget, d);
    const double one_way_doppler = state.speed() * std::cos(state.radial_angle()) * budget.carrier_hz / kSpeedOfLight;

    Path p;
    p.is_los = true;
    p.direction = state.direction();
    if (round_trip) {
        p.delay_s = 2.0 * d / kSpeedOfLight;
        p.doppler_hz = 2.0 * one_way_doppler;
        p.gain = h * std::sqrt(radar_cross_section);
    } else {
        p.delay_s = d / kSpeedOfLight;
        p.doppler_hz = one_way_doppler;
        p.gain = h;
    }
    return p;
}

std::vector<Path> draw_nlos_paths(double e, const Path& los, std::size_t count, const FrameLayout& layout,
                                  Rng& rng, const NlosWindow& window)
{
    if (!(e >= 0.0) || !std::isfinite(e))
        throw std::invalid_argument("NLOS strength must be non-negative");
    if (count == 0)
        throw std::invalid_argument("NLOS path count must be at least 1");
    if (window.min_excess_samples == 0 || window.max_excess_samples < window.min_excess_samples)
        throw std::invalid_argument("NLOS excess-delay window must satisfy 1 <= min <= max");
    if (!(window.doppler_fraction >= 0.0 && window.doppler_fraction <= 1.0))
        throw std::invalid_argument("NLOS Doppler fraction must lie in [0, 1]");

    const double dt = layout.delay_bin_s();
    const double dnu = layout.doppler_bin_hz();
    const auto los_delay_bin = static_cast<long>(std::llround(los.delay_s / dt));
    const auto los_doppler_bin = static_cast<long>(std::llround(los.doppler_hz / dnu));
    const auto max_k = static_cast<long>(std::floor(window.doppler_fraction * static_cast<double>(layout.n) / 2.0));

    std::uniform_int_distribution<long> excess_dist(static_cast<long>(window.min_excess_samples),
                                                    static_cast<long>(window.max_excess_samples));
    std::uniform_int_distribution<long> doppler_dist(-max_k, max_k);

    std::vector<std::pair<long, long>> taken{{los_delay_bin, los_doppler_bin}};
    auto clear_of_others = [&](long dl, long dk) {
        return std::all_of(taken.begin(), taken.end(), [&](const auto& c) {
            return std::max(std::abs(c.first - dl), std::abs(c.second - dk)) >= 2;
        });
    };

    const double variance = e * std::norm(los.gain) / static_cast<double>(count);
    std::vector<Path> out;
    out.reserve(count);
    constexpr int kMaxAttempts = 10000;
    for (std::size_t i = 0; i < count; ++i) {
        int attempt = 0;
        long dl = 0;
        long dk = 0;
        do {
            if (++attempt > kMaxAttempts)
                throw std::runtime_error("NLOS window too small for " + std::to_string(count) + " separable paths");
            dl = los_delay_bin + excess_dist(rng);
            dk = doppler_dist(rng);
        } while (!clear_of_others(dl, dk));
        taken.emplace_back(dl, dk);

        Path p;
        p.is_los = false;
        p.direction = los.direction;
        // Excess delay is added to the exact LOS delay so an off-grid LOS keeps
        // the same fractional offset for all of its scatterers.
        p.delay_s = los.delay_s + static_cast<double>(dl - los_delay_bin) * dt;
        p.doppler_hz = static_cast<double>(dk) * dnu;
        p.gain = e > 0.0 ? complex_gaussian(rng, variance) : cplx{};
        out.push_back(p);
    }
    return out;
}

ArraySeries apply_radar_channel(const TimeSeries& tx, const PathSet& paths, const Direction& tx_dir,
                                const UpaConfig& arrays, double n0, Rng& rng, OffGridPolicy policy)
{
    check_noise(n0);
    const FrameLayout layout = tx.layout();
    const SteeringVector a = steering(arrays, tx_dir);
    const auto elements = static_cast<Eigen::Index>(arrays.elements());
    const auto len = static_cast<Eigen::Index>(tx.size());

    ArraySeries rx{Eigen::MatrixXcd::Zero(elements, len), layout};
    for (const Path& p : paths.paths()) {
        const GridShift g = snap_to_grid(p, layout, policy);
        const SteeringVector b = steering(arrays, p.direction);
        const Eigen::VectorXcd weight = p.gain * b * b.dot(a);
        rx.samples.noalias() += weight * shifted(tx.samples(), g, layout.delay_bin_s()).transpose();
    }
    if (n0 > 0.0)
        for (Eigen::Index t = 0; t < len; ++t)
            for (Eigen::Index e = 0; e < elements; ++e)
                rx.samples(e, t) += complex_gaussian(rng, n0);
    return rx;
}

TimeSeries apply_comm_channel(const TimeSeries& tx, const PathSet& paths, const Direction& tx_dir,
                              const UpaConfig& arrays, double n0, Rng& rng, OffGridPolicy policy)
{
    check_noise(n0);
    const FrameLayout layout = tx.layout();
    const SteeringVector a = steering(arrays, tx_dir);

    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(Eigen::Index(tx.size()));
    for (const Path& p : paths.paths()) {
        const GridShift g = snap_to_grid(p, layout, policy);
        const cplx weight = p.gain * beam_gain(a, steering(arrays, p.direction));
        y.noalias() += weight * shifted(tx.samples(), g, layout.delay_bin_s());
    }
    if (n0 > 0.0)
        for (Eigen::Index t = 0; t < y.size(); ++t)
            y(t) += complex_gaussian(rng, n0);
    return TimeSeries(layout.m, layout.n, std::move(y), layout.timing);
}

TimeSeries beamform(const ArraySeries& rx, const SteeringVector& w)
{
    if (w.size() != rx.samples.rows())
        throw std::invalid_argument("beamform: weight length differs from element count");
    Eigen::VectorXcd y = rx.samples.transpose() * w.conjugate();
    return TimeSeries(rx.layout.m, rx.layout.n, std::move(y), rx.layout.timing);
}

void write_paths_csv(std::ostream& os, const PathSet& paths)
{
    using detail::format_double;
    os << "gain_re,gain_im,delay_s,doppler_hz,azimuth_rad,elevation_rad,los\n";
    for (const Path& p : paths.paths())
        os << format_double(p.gain.real()) << ',' << format_double(p.gain.imag()) << ','
           << format_double(p.delay_s) << ',' << format_double(p.doppler_hz) << ','
           << format_double(p.direction.azimuth()) << ',' << format_double(p.direction.elevation()) << ','
           << (p.is_los ? 1 : 0) << '\n';
}

PathSet read_paths_csv(std::istream& is)
{
    std::string line;
    std::size_t lineno = 0;
    std::vector<Path> paths;
    auto fail = [&](const std::string& why) {
        throw std::runtime_error("path CSV line " + std::to_string(lineno) + ": " + why);
    };

    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || (lineno == 1 && line.rfind("gain_re", 0) == 0))
            continue;

        double v[6];
        int los = 0;
        const char* p = line.data();
        const char* end = line.data() + line.size();
        for (int i = 0; i < 7; ++i) {
            const auto res = i < 6 ? std::from_chars(p, end, v[i]) : std::from_chars(p, end, los);
            if (res.ec != std::errc{})
                fail("field " + std::to_string(i + 1) + " is not a number");
            p = res.ptr;
            if (i < 6) {
                if (p == end || *p != ',')
                    fail("expected 7 comma-separated fields");
                ++p;
            }
        }
        if (p != end)
            fail("trailing characters");
        if (los != 0 && los != 1)
            fail("los flag must be 0 or 1");

        Path path;
        path.gain = {v[0], v[1]};
        path.delay_s = v[2];
        path.doppler_hz = v[3];
        path.direction = Direction(v[4], v[5]);
        path.is_los = los == 1;
        paths.push_back(path);
    }
    return PathSet(std::move(paths));
}

} // namespace otfs_isac
