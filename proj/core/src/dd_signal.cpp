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

#include "otfs_isac/dd_signal.hpp"

#include "fft.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace otfs_isac {
namespace {

using detail::FftSign;

void check_dims(std::size_t m, std::size_t n)
{
    if (m < 2 || n < 2)
        throw std::invalid_argument("grid dimensions must be >= 2 (got M=" + std::to_string(m) +
                                    ", N=" + std::to_string(n) + ")");
}

void check_shape(const Eigen::MatrixXcd& data, std::size_t m, std::size_t n, const char* what)
{
    if (static_cast<std::size_t>(data.rows()) != n || static_cast<std::size_t>(data.cols()) != m)
        throw std::invalid_argument(std::string(what) + ": matrix is " + std::to_string(data.rows()) + "x" +
                                    std::to_string(data.cols()) + ", expected N x M = " + std::to_string(n) +
                                    "x" + std::to_string(m));
}

// Eigen storage is column-major, so each column is contiguous.
void fft_columns(Eigen::MatrixXcd& a, FftSign sign)
{
    for (Eigen::Index c = 0; c < a.cols(); ++c)
        detail::fft_inplace(a.col(c).data(), static_cast<std::size_t>(a.rows()), sign);
}

void fft_rows(Eigen::MatrixXcd& a, FftSign sign)
{
    std::vector<cplx> row(static_cast<std::size_t>(a.cols()));
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        for (Eigen::Index c = 0; c < a.cols(); ++c)
            row[std::size_t(c)] = a(r, c);
        detail::fft_inplace(row.data(), row.size(), sign);
        for (Eigen::Index c = 0; c < a.cols(); ++c)
            a(r, c) = row[std::size_t(c)];
    }
}

} // namespace

FrameTiming FrameTiming::from_symbol_duration(double symbol_duration_s)
{
    if (!(symbol_duration_s > 0.0) || !std::isfinite(symbol_duration_s))
        throw std::invalid_argument("symbol duration must be positive and finite");
    return FrameTiming(symbol_duration_s);
}

FrameTiming FrameTiming::from_frame_duration(double frame_duration_s, std::size_t n)
{
    if (n == 0)
        throw std::invalid_argument("slot count must be positive");
    return from_symbol_duration(frame_duration_s / static_cast<double>(n));
}

DdGrid::DdGrid(std::size_t m, std::size_t n) : m_(m), n_(n)
{
    check_dims(m, n);
    data_ = Eigen::MatrixXcd::Zero(Eigen::Index(n), Eigen::Index(m));
}

DdGrid::DdGrid(std::size_t m, std::size_t n, Eigen::MatrixXcd data) : m_(m), n_(n), data_(std::move(data))
{
    check_dims(m, n);
    check_shape(data_, m, n, "DdGrid");
}

TfGrid::TfGrid(std::size_t m, std::size_t n, FrameTiming timing) : m_(m), n_(n), timing_(timing)
{
    check_dims(m, n);
    data_ = Eigen::MatrixXcd::Zero(Eigen::Index(n), Eigen::Index(m));
}

TfGrid::TfGrid(std::size_t m, std::size_t n, Eigen::MatrixXcd data, FrameTiming timing)
    : m_(m), n_(n), data_(std::move(data)), timing_(timing)
{
    check_dims(m, n);
    check_shape(data_, m, n, "TfGrid");
}

TimeSeries::TimeSeries(std::size_t m, std::size_t n, FrameTiming timing) : m_(m), n_(n), timing_(timing)
{
    check_dims(m, n);
    samples_ = Eigen::VectorXcd::Zero(Eigen::Index(m * n));
}

TimeSeries::TimeSeries(std::size_t m, std::size_t n, Eigen::VectorXcd samples, FrameTiming timing)
    : m_(m), n_(n), samples_(std::move(samples)), timing_(timing)
{
    check_dims(m, n);
    if (static_cast<std::size_t>(samples_.size()) != m * n)
        throw std::invalid_argument("TimeSeries: " + std::to_string(samples_.size()) + " samples, expected M*N = " +
                                    std::to_string(m * n));
}

TfGrid isfft(const DdGrid& dd, FrameTiming timing)
{
    check_shape(dd.data(), dd.m(), dd.n(), "isfft");
    Eigen::MatrixXcd a = dd.data();
    fft_columns(a, FftSign::backward);  // k -> n, exp(+j2pi nk/N)
    fft_rows(a, FftSign::forward);      // l -> m, exp(-j2pi ml/M)
    a *= 1.0 / std::sqrt(static_cast<double>(dd.m() * dd.n()));
    return TfGrid(dd.m(), dd.n(), std::move(a), timing);
}

DdGrid sfft(const TfGrid& tf)
{
    check_shape(tf.data(), tf.m(), tf.n(), "sfft");
    Eigen::MatrixXcd a = tf.data();
    fft_columns(a, FftSign::forward);
    fft_rows(a, FftSign::backward);
    a *= 1.0 / std::sqrt(static_cast<double>(tf.m() * tf.n()));
    return DdGrid(tf.m(), tf.n(), std::move(a));
}

TimeSeries heisenberg(const TfGrid& tf)
{
    check_shape(tf.data(), tf.m(), tf.n(), "heisenberg");
    const std::size_t m = tf.m();
    const std::size_t n = tf.n();
    // Transposing makes each slot a contiguous column of length M.
    Eigen::MatrixXcd slots = tf.data().transpose();
    fft_columns(slots, FftSign::backward);
    slots *= 1.0 / std::sqrt(static_cast<double>(m));
    Eigen::VectorXcd s = Eigen::Map<Eigen::VectorXcd>(slots.data(), Eigen::Index(m * n));
    return TimeSeries(m, n, std::move(s), tf.timing());
}

TfGrid wigner(const Eigen::VectorXcd& samples, std::size_t m, FrameTiming timing)
{
    if (m < 2 || samples.size() == 0 || static_cast<std::size_t>(samples.size()) % m != 0)
        throw std::invalid_argument("wigner: " + std::to_string(samples.size()) +
                                    " samples cannot be split into slots of " + std::to_string(m));
    const std::size_t n = static_cast<std::size_t>(samples.size()) / m;
    Eigen::MatrixXcd slots = Eigen::Map<const Eigen::MatrixXcd>(samples.data(), Eigen::Index(m), Eigen::Index(n));
    fft_columns(slots, FftSign::forward);
    slots *= 1.0 / std::sqrt(static_cast<double>(m));
    return TfGrid(m, n, slots.transpose(), timing);
}

TfGrid wigner(const TimeSeries& ts)
{
    return wigner(ts.samples(), ts.m(), ts.timing());
}

TimeSeries modulate(const DdGrid& dd, FrameTiming timing)
{
    return heisenberg(isfft(dd, timing));
}

DdGrid demodulate(const TimeSeries& ts)
{
    return sfft(wigner(ts));
}

DdGrid pilot_frame(std::size_t m, std::size_t n, double energy)
{
    if (!(energy >= 0.0))
        throw std::invalid_argument("pilot energy must be non-negative");
    DdGrid dd(m, n);
    dd(0, 0) = std::sqrt(energy);
    return dd;
}

DdGrid qpsk_frame(std::size_t m, std::size_t n, double energy, Rng& rng)
{
    if (!(energy >= 0.0))
        throw std::invalid_argument("frame energy must be non-negative");
    DdGrid dd(m, n);
    const double amp = std::sqrt(energy / static_cast<double>(m * n) / 2.0);
    std::uniform_int_distribution<int> bit(0, 1);
    for (std::size_t l = 0; l < m; ++l)
        for (std::size_t k = 0; k < n; ++k) {
            const double re = bit(rng) ? amp : -amp;
            const double im = bit(rng) ? amp : -amp;
            dd(k, l) = {re, im};
        }
    return dd;
}

} // namespace otfs_isac
