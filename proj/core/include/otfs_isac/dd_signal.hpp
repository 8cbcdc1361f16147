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

// Discrete OTFS chain between the delay-Doppler (DD), time-frequency (TF)
// and sampled time domains.
//
// Conventions
//   DdGrid  data(k, l): N rows (Doppler index k), M columns (delay index l)
//   TfGrid  data(n, m): N rows (time slot n),     M columns (subcarrier m)
//   TimeSeries samples[n * M + m']: slot n, intra-slot sample m', interval T/M
//
// All four transforms are unitary. With the rectangular pulse and critical
// sampling at M * df, the Heisenberg and Wigner transforms reduce to per-slot
// M-point inverse / forward DFTs.

#include "otfs_isac/common.hpp"

#include <Eigen/Dense>

#include <cstddef>

namespace otfs_isac {

/// Symbol duration T and subcarrier spacing df with T * df = 1.
class FrameTiming {
public:
    FrameTiming() = default;

    static FrameTiming from_symbol_duration(double symbol_duration_s);

    /// T = frame_duration / N.
    static FrameTiming from_frame_duration(double frame_duration_s, std::size_t n);

    double symbol_duration_s() const noexcept { return symbol_duration_s_; }
    double subcarrier_spacing_hz() const noexcept { return 1.0 / symbol_duration_s_; }
    double sample_interval_s(std::size_t m) const noexcept { return symbol_duration_s_ / static_cast<double>(m); }
    /// Doppler resolution of an N-slot frame, 1 / (N T).
    double doppler_bin_hz(std::size_t n) const noexcept { return 1.0 / (static_cast<double>(n) * symbol_duration_s_); }

    friend bool operator==(const FrameTiming&, const FrameTiming&) = default;

private:
    explicit FrameTiming(double t) : symbol_duration_s_(t) {}
    double symbol_duration_s_ = 1.0;
};

/// Grid shape plus timing: delay bin T / M, Doppler bin 1 / (N T).
struct FrameLayout {
    std::size_t m = 32;
    std::size_t n = 32;
    FrameTiming timing{};

    std::size_t samples() const noexcept { return m * n; }
    double delay_bin_s() const noexcept { return timing.sample_interval_s(m); }
    double doppler_bin_hz() const noexcept { return timing.doppler_bin_hz(n); }
    double frame_duration_s() const noexcept { return timing.symbol_duration_s() * static_cast<double>(n); }
};

class DdGrid {
public:
    DdGrid(std::size_t m, std::size_t n);
    /// Throws std::invalid_argument if `data` is not n x m.
    DdGrid(std::size_t m, std::size_t n, Eigen::MatrixXcd data);

    std::size_t m() const noexcept { return m_; }
    std::size_t n() const noexcept { return n_; }
    const Eigen::MatrixXcd& data() const noexcept { return data_; }
    Eigen::MatrixXcd& data() noexcept { return data_; }
    cplx operator()(std::size_t k, std::size_t l) const { return data_(Eigen::Index(k), Eigen::Index(l)); }
    cplx& operator()(std::size_t k, std::size_t l) { return data_(Eigen::Index(k), Eigen::Index(l)); }
    double energy() const { return data_.squaredNorm(); }

private:
    std::size_t m_;
    std::size_t n_;
    Eigen::MatrixXcd data_;
};

class TfGrid {
public:
    TfGrid(std::size_t m, std::size_t n, FrameTiming timing = {});
    TfGrid(std::size_t m, std::size_t n, Eigen::MatrixXcd data, FrameTiming timing = {});

    std::size_t m() const noexcept { return m_; }
    std::size_t n() const noexcept { return n_; }
    const FrameTiming& timing() const noexcept { return timing_; }
    const Eigen::MatrixXcd& data() const noexcept { return data_; }
    Eigen::MatrixXcd& data() noexcept { return data_; }
    cplx operator()(std::size_t n, std::size_t m) const { return data_(Eigen::Index(n), Eigen::Index(m)); }
    cplx& operator()(std::size_t n, std::size_t m) { return data_(Eigen::Index(n), Eigen::Index(m)); }
    double energy() const { return data_.squaredNorm(); }

private:
    std::size_t m_;
    std::size_t n_;
    Eigen::MatrixXcd data_;
    FrameTiming timing_;
};

/// One OTFS frame sampled at interval T / M: N slots of M samples each.
class TimeSeries {
public:
    TimeSeries(std::size_t m, std::size_t n, FrameTiming timing = {});
    /// Throws std::invalid_argument unless samples.size() == m * n.
    TimeSeries(std::size_t m, std::size_t n, Eigen::VectorXcd samples, FrameTiming timing = {});

    std::size_t m() const noexcept { return m_; }
    std::size_t n() const noexcept { return n_; }
    std::size_t size() const noexcept { return m_ * n_; }
    const FrameTiming& timing() const noexcept { return timing_; }
    double sample_interval_s() const noexcept { return timing_.sample_interval_s(m_); }
    const Eigen::VectorXcd& samples() const noexcept { return samples_; }
    Eigen::VectorXcd& samples() noexcept { return samples_; }
    double energy() const { return samples_.squaredNorm(); }
    FrameLayout layout() const noexcept { return {m_, n_, timing_}; }

private:
    std::size_t m_;
    std::size_t n_;
    Eigen::VectorXcd samples_;
    FrameTiming timing_;
};

/// X[n,m] = 1/sqrt(NM) sum_k sum_l x[k,l] exp(j2pi(nk/N - ml/M)).
TfGrid isfft(const DdGrid& dd, FrameTiming timing = {});

/// y[k,l] = 1/sqrt(NM) sum_n sum_m Y[n,m] exp(-j2pi(nk/N - ml/M)).
DdGrid sfft(const TfGrid& tf);

/// s[nM + m'] = 1/sqrt(M) sum_m X[n,m] exp(j2pi m m'/M).
TimeSeries heisenberg(const TfGrid& tf);

/// Inverse of heisenberg: Y[n,m] = 1/sqrt(M) sum_m' s[nM + m'] exp(-j2pi m m'/M).
TfGrid wigner(const TimeSeries& ts);

/// Slices a raw sample vector into slots of m samples; throws if the length
/// is not a multiple of m.
TfGrid wigner(const Eigen::VectorXcd& samples, std::size_t m, FrameTiming timing = {});

TimeSeries modulate(const DdGrid& dd, FrameTiming timing = {});
DdGrid demodulate(const TimeSeries& ts);

/// Single DD impulse at (0, 0) carrying `energy`. Its sampled waveform is a
/// pulse train with one pulse per slot, whose ambiguity function over
/// M delay bins x N Doppler bins is an ideal thumbtack.
DdGrid pilot_frame(std::size_t m, std::size_t n, double energy);

/// Unit-modulus QPSK symbols scaled so the frame carries `energy`.
DdGrid qpsk_frame(std::size_t m, std::size_t n, double energy, Rng& rng);

} // namespace otfs_isac
