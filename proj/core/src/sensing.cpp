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

#include "otfs_isac/sensing.hpp"

#include "fft.hpp"
#include "format.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace otfs_isac {
namespace {

void check_source_count(std::size_t source_count, const Eigen::MatrixXcd& snapshots, const UpaConfig& arrays)
{
    validate(arrays);
    if (static_cast<std::size_t>(snapshots.rows()) != arrays.elements())
        throw std::invalid_argument("MUSIC: snapshot rows differ from the element count");
    if (source_count == 0)
        throw std::invalid_argument("MUSIC: source count must be at least 1");
    if (source_count >= arrays.elements())
        throw std::invalid_argument("MUSIC: need more elements than sources");
    if (static_cast<std::size_t>(snapshots.cols()) < source_count)
        throw std::invalid_argument("MUSIC: fewer snapshots than sources, covariance is rank deficient");
}

std::vector<double> grid_axis(double lo, double hi, double step)
{
    if (!(step > 0.0) || !(hi >= lo))
        throw std::invalid_argument("angle grid: need step > 0 and max >= min");
    const auto first = static_cast<long>(std::ceil(lo / step - 1e-9));
    const auto last = static_cast<long>(std::floor(hi / step + 1e-9));
    std::vector<double> axis;
    for (long i = first; i <= last; ++i)
        axis.push_back(static_cast<double>(i) * step);
    if (axis.empty())
        throw std::invalid_argument("angle grid range holds no grid point");
    return axis;
}

} // namespace

MfMap matched_filter_map(const TimeSeries& rx, const TimeSeries& tx, std::optional<std::size_t> max_delay_bins)
{
    if (rx.m() != tx.m() || rx.n() != tx.n())
        throw std::invalid_argument("matched_filter_map: rx and tx frames differ in shape");
    const std::size_t m = tx.m();
    const std::size_t n = tx.n();
    const std::size_t len = m * n;
    const std::size_t lags = std::min(max_delay_bins.value_or(m), len);
    if (lags == 0)
        throw std::invalid_argument("matched_filter_map: no delay lags requested");

    MfMap map;
    map.values.resize(Eigen::Index(lags), Eigen::Index(n));
    map.delay_bin_s = tx.sample_interval_s();
    map.doppler_bin_hz = tx.timing().doppler_bin_hz(n);

    const cplx* r = rx.samples().data();
    const cplx* x = tx.samples().data();
    std::vector<cplx> prod(len);
    for (std::size_t l = 0; l < lags; ++l) {
        for (std::size_t t = 0; t < len; ++t)
            prod[t] = r[t] * std::conj(x[(t + len - l) % len]);
        detail::fft_inplace(prod.data(), len, detail::FftSign::forward);
        for (std::size_t c = 0; c < n; ++c) {
            const long k = static_cast<long>(c) - static_cast<long>(n / 2);
            const std::size_t f = k < 0 ? len - static_cast<std::size_t>(-k) : static_cast<std::size_t>(k);
            map.values(Eigen::Index(l), Eigen::Index(c)) = prod[f];
        }
    }
    return map;
}

std::vector<Detection> detect_peaks(const MfMap& map, double threshold_rel)
{
    if (map.values.size() == 0)
        throw std::invalid_argument("detect_peaks: empty map");
    if (!(threshold_rel > 0.0 && threshold_rel < 1.0))
        throw std::invalid_argument("detect_peaks: threshold must lie in (0, 1)");

    const Eigen::MatrixXd mag = map.values.cwiseAbs();
    const Eigen::Index rows = mag.rows();
    const Eigen::Index cols = mag.cols();
    const double peak = mag.maxCoeff();
    if (!(peak > 0.0))
        return {};
    const double floor_level = threshold_rel * peak;

    struct Cell {
        Eigen::Index r, c;
        double v;
    };
    std::vector<Cell> candidates;
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) {
            const double v = mag(r, c);
            if (v < floor_level)
                continue;
            bool is_max = true;
            for (Eigen::Index dr = -1; dr <= 1 && is_max; ++dr)
                for (Eigen::Index dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc == 0)
                        continue;
                    const Eigen::Index rr = r + dr;
                    if (rr < 0 || rr >= rows)
                        continue;
                    const Eigen::Index cc = (c + dc + cols) % cols;
                    if (mag(rr, cc) > v) {
                        is_max = false;
                        break;
                    }
                }
            if (is_max)
                candidates.push_back({r, c, v});
        }

    std::stable_sort(candidates.begin(), candidates.end(), [](const Cell& a, const Cell& b) { return a.v > b.v; });
    std::vector<Cell> kept;
    for (const Cell& cand : candidates) {
        const bool guarded = std::any_of(kept.begin(), kept.end(), [&](const Cell& k) {
            const Eigen::Index dc = std::abs(k.c - cand.c);
            return std::abs(k.r - cand.r) <= 1 && std::min(dc, cols - dc) <= 1;
        });
        if (!guarded)
            kept.push_back(cand);
    }
    std::sort(kept.begin(), kept.end(), [](const Cell& a, const Cell& b) { return a.r != b.r ? a.r < b.r : a.c < b.c; });

    std::vector<Detection> out;
    out.reserve(kept.size());
    for (const Cell& c : kept) {
        Detection d;
        d.delay_bin = static_cast<std::size_t>(c.r);
        d.doppler_bin = map.doppler_index(static_cast<std::size_t>(c.c));
        d.delay_s = static_cast<double>(d.delay_bin) * map.delay_bin_s;
        d.doppler_hz = static_cast<double>(d.doppler_bin) * map.doppler_bin_hz;
        d.magnitude = c.v;
        d.value = map.values(c.r, c.c);
        out.push_back(d);
    }
    if (!out.empty())
        out.front().is_los = true;
    return out;
}

NlosStrengthEstimate estimate_nlos_strength(const std::vector<Detection>& detections)
{
    const auto los = std::find_if(detections.begin(), detections.end(), [](const Detection& d) { return d.is_los; });
    if (los == detections.end())
        throw std::invalid_argument("estimate_nlos_strength: no LOS detection");
    const double los_power = los->magnitude * los->magnitude;
    if (!(los_power > 0.0))
        throw std::invalid_argument("estimate_nlos_strength: LOS magnitude is zero");
    double acc = 0.0;
    for (const Detection& d : detections)
        if (!d.is_los)
            acc += d.magnitude * d.magnitude;
    return {acc / los_power};
}

AngleGrid AngleGrid::around(const Direction& centre, double half_width, double step)
{
    if (!(half_width >= 0.0))
        throw std::invalid_argument("angle window half-width must be non-negative");
    AngleGrid g;
    g.step = step;
    // A centre outside the scan range (e.g. a prediction above the array)
    // is pulled onto its edge so the window never comes out empty.
    const double az = std::clamp(centre.azimuth(), -kPi / 2, kPi / 2);
    const double el = std::clamp(centre.elevation(), 0.0, kPi / 2);
    g.azimuth_min = std::max(-kPi / 2, az - half_width);
    g.azimuth_max = std::min(kPi / 2, az + half_width);
    g.elevation_min = std::max(0.0, el - half_width);
    g.elevation_max = std::min(kPi / 2, el + half_width);
    return g;
}

std::vector<double> AngleGrid::azimuths() const { return grid_axis(azimuth_min, azimuth_max, step); }
std::vector<double> AngleGrid::elevations() const { return grid_axis(elevation_min, elevation_max, step); }

Eigen::MatrixXcd sample_covariance(const Eigen::MatrixXcd& snapshots)
{
    if (snapshots.cols() == 0)
        throw std::invalid_argument("sample_covariance: no snapshots");
    return snapshots * snapshots.adjoint() / static_cast<double>(snapshots.cols());
}

Eigen::MatrixXd music_spectrum(const Eigen::MatrixXcd& snapshots, std::size_t source_count, const UpaConfig& arrays,
                               const AngleGrid& grid)
{
    check_source_count(source_count, snapshots, arrays);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(sample_covariance(snapshots));
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("MUSIC: eigendecomposition failed");
    // Eigenvalues ascend, so the signal subspace is the trailing block.
    const auto k = static_cast<Eigen::Index>(source_count);
    const Eigen::MatrixXcd es = eig.eigenvectors().rightCols(k);

    const auto az = grid.azimuths();
    const auto el = grid.elevations();
    Eigen::MatrixXd spec(Eigen::Index(az.size()), Eigen::Index(el.size()));
    for (std::size_t i = 0; i < az.size(); ++i)
        for (std::size_t j = 0; j < el.size(); ++j) {
            const SteeringVector b = steering(arrays, Direction(az[i], el[j]));
            // ||E_n^H b||^2 = 1 - ||E_s^H b||^2 for a unit-norm b.
            const double noise_proj = std::max(1.0 - (es.adjoint() * b).squaredNorm(), 1e-15);
            spec(Eigen::Index(i), Eigen::Index(j)) = 1.0 / noise_proj;
        }
    return spec;
}

std::vector<Direction> estimate_angles(const Eigen::MatrixXcd& snapshots, std::size_t source_count,
                                       const UpaConfig& arrays, const AngleGrid& grid)
{
    const Eigen::MatrixXd spec = music_spectrum(snapshots, source_count, arrays, grid);
    const auto az = grid.azimuths();
    const auto el = grid.elevations();
    const Eigen::Index rows = spec.rows();
    const Eigen::Index cols = spec.cols();

    struct Cell {
        Eigen::Index r, c;
        double v;
    };
    std::vector<Cell> peaks;
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) {
            const double v = spec(r, c);
            bool is_max = true;
            for (Eigen::Index dr = -1; dr <= 1 && is_max; ++dr)
                for (Eigen::Index dc = -1; dc <= 1; ++dc) {
                    const Eigen::Index rr = r + dr;
                    const Eigen::Index cc = c + dc;
                    if ((dr == 0 && dc == 0) || rr < 0 || rr >= rows || cc < 0 || cc >= cols)
                        continue;
                    if (spec(rr, cc) > v) {
                        is_max = false;
                        break;
                    }
                }
            if (is_max)
                peaks.push_back({r, c, v});
        }
    std::stable_sort(peaks.begin(), peaks.end(), [](const Cell& a, const Cell& b) { return a.v > b.v; });

    std::vector<Direction> out;
    std::vector<Cell> kept;
    for (const Cell& p : peaks) {
        if (kept.size() == source_count)
            break;
        const bool guarded = std::any_of(kept.begin(), kept.end(), [&](const Cell& k) {
            return std::abs(k.r - p.r) <= 1 && std::abs(k.c - p.c) <= 1;
        });
        if (guarded)
            continue;
        kept.push_back(p);
        out.emplace_back(az[std::size_t(p.r)], el[std::size_t(p.c)]);
    }
    return out;
}

void write_mf_map_csv(std::ostream& os, const MfMap& map)
{
    os << "delay_bin,doppler_bin,magnitude\n";
    for (Eigen::Index r = 0; r < map.values.rows(); ++r)
        for (Eigen::Index c = 0; c < map.values.cols(); ++c)
            os << r << ',' << map.doppler_index(std::size_t(c)) << ','
               << detail::format_double(std::abs(map.values(r, c))) << '\n';
}

} // namespace otfs_isac
