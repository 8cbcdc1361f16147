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
#include "otfs_isac/sensing.hpp"

#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <sstream>

using namespace otfs_isac;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

TimeSeries qpsk_series(std::size_t m, std::size_t n, std::uint64_t seed)
{
    Rng rng(seed);
    return modulate(qpsk_frame(m, n, double(m * n), rng), FrameTiming::from_symbol_duration(1e-6));
}

TimeSeries pilot_series(std::size_t m, std::size_t n)
{
    return modulate(pilot_frame(m, n, double(m * n)), FrameTiming::from_symbol_duration(1e-6));
}

struct Tap {
    cplx gain;
    std::size_t delay;
    long doppler;
};

TimeSeries echo(const TimeSeries& tx, const std::vector<Tap>& taps)
{
    const FrameLayout l = tx.layout();
    std::vector<Path> paths;
    for (std::size_t i = 0; i < taps.size(); ++i)
        paths.push_back(Path{taps[i].gain, double(taps[i].delay) * l.delay_bin_s(),
                             double(taps[i].doppler) * l.doppler_bin_hz(), {}, i == 0});
    Rng rng(0);
    return apply_comm_channel(tx, PathSet(paths), {}, {1, 1}, 0.0, rng);
}

// Direct correlation at one (lag, Doppler bin).
cplx direct_mf(const TimeSeries& rx, const TimeSeries& tx, std::size_t lag, long k)
{
    const std::size_t len = tx.size();
    cplx acc = 0.0;
    for (std::size_t t = 0; t < len; ++t)
        acc += rx.samples()(Eigen::Index(t)) * std::conj(tx.samples()(Eigen::Index((t + len - lag) % len))) *
               std::polar(1.0, -2.0 * kPi * double(k) * double(t) / double(len));
    return acc;
}

std::pair<Eigen::Index, Eigen::Index> argmax(const MfMap& map)
{
    Eigen::Index r = 0;
    Eigen::Index c = 0;
    map.values.cwiseAbs().maxCoeff(&r, &c);
    return {r, c};
}

Eigen::MatrixXcd snapshots_for(const std::vector<Direction>& dirs, const UpaConfig& arrays, std::size_t count,
                               double snr_db, Rng& rng)
{
    const auto el = Eigen::Index(arrays.elements());
    const double noise = db_to_linear(-snr_db);
    Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(el, Eigen::Index(count));
    for (const auto& d : dirs) {
        // Unit power per element: undo the 1/sqrt(NxNy) normalization.
        const Eigen::VectorXcd a = steering(arrays, d) * std::sqrt(double(el));
        for (Eigen::Index t = 0; t < x.cols(); ++t)
            x.col(t) += a * complex_gaussian(rng, 1.0);
    }
    for (Eigen::Index t = 0; t < x.cols(); ++t)
        for (Eigen::Index e = 0; e < el; ++e)
            x(e, t) += complex_gaussian(rng, noise);
    return x;
}

} // namespace

TEST_CASE("autocorrelation peak sits at the origin with the signal energy")
{
    const TimeSeries tx = qpsk_series(16, 16, 1);
    const MfMap map = matched_filter_map(tx, tx);
    const auto [r, c] = argmax(map);
    CHECK(r == 0);
    CHECK(map.doppler_index(std::size_t(c)) == 0);
    CHECK_THAT(std::abs(map.values(r, c)), WithinRel(tx.energy(), 1e-12));
    CHECK_THAT(map.delay_bin_s, WithinRel(1e-6 / 16, 1e-15));
    CHECK_THAT(map.doppler_bin_hz, WithinRel(1.0 / (16 * 1e-6), 1e-12));
}

TEST_CASE("matched filter map matches the direct correlation")
{
    const TimeSeries tx = qpsk_series(8, 8, 2);
    const TimeSeries rx = echo(tx, {{cplx(0.7, 0.1), 2, 1}, {cplx(0.0, 0.3), 5, -3}});
    const MfMap map = matched_filter_map(rx, tx);
    REQUIRE(map.delay_bins() == 8);
    REQUIRE(map.doppler_bins() == 8);
    for (std::size_t l = 0; l < 8; ++l)
        for (std::size_t c = 0; c < 8; ++c)
            CHECK(std::abs(map.values(Eigen::Index(l), Eigen::Index(c)) - direct_mf(rx, tx, l, map.doppler_index(c))) <
                  1e-9);
}

TEST_CASE("single on-grid path is found at its bins")
{
    const TimeSeries tx = qpsk_series(32, 32, 3);
    const TimeSeries rx = echo(tx, {{cplx(0.3, -0.4), 5, 3}});
    const MfMap map = matched_filter_map(rx, tx);
    const auto [r, c] = argmax(map);
    CHECK(r == 5);
    CHECK(map.doppler_index(std::size_t(c)) == 3);

    const auto det = detect_peaks(map, 0.5);
    REQUIRE(det.size() == 1);
    CHECK(det[0].is_los);
    CHECK(det[0].delay_bin == 5);
    CHECK(det[0].doppler_bin == 3);
    CHECK(estimate_nlos_strength(det).e_hat == 0.0);
}

TEST_CASE("two paths with amplitude ratio 0.2")
{
    // The pilot frame has no cross-lag sidelobes; a random QPSK frame leaves
    // about 1/sqrt(MN) of the LOS peak under every other cell.
    const TimeSeries tx = pilot_series(32, 32);
    const TimeSeries rx = echo(tx, {{1.0, 3, 0}, {cplx(0.0, 0.2), 9, -4}});
    const MfMap map = matched_filter_map(rx, tx);
    const auto det = detect_peaks(map, 0.1);
    REQUIRE(det.size() == 2);
    CHECK(det[0].is_los);
    CHECK_FALSE(det[1].is_los);
    CHECK(det[0].delay_bin == 3);
    CHECK(det[1].delay_bin == 9);
    CHECK(det[1].doppler_bin == -4);
    CHECK_THAT(det[1].magnitude / det[0].magnitude, WithinAbs(0.2, 0.02));
}

TEST_CASE("map is linear in the echo amplitude")
{
    const TimeSeries tx = qpsk_series(16, 8, 5);
    const TimeSeries rx = echo(tx, {{1.0, 1, 1}, {0.3, 4, 2}});
    TimeSeries scaled = rx;
    scaled.samples() *= cplx(-3.0, 2.0);
    const MfMap a = matched_filter_map(rx, tx);
    const MfMap b = matched_filter_map(scaled, tx);
    CHECK((b.values - cplx(-3.0, 2.0) * a.values).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(argmax(a) == argmax(b));
    CHECK_THAT(estimate_nlos_strength(detect_peaks(a, 0.05)).e_hat,
               WithinRel(estimate_nlos_strength(detect_peaks(b, 0.05)).e_hat, 1e-12));
}

TEST_CASE("noiseless K-path pilot echoes: exactly K maxima at the true bins")
{
    const TimeSeries tx = pilot_series(64, 64);
    Rng rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        const FrameLayout l = tx.layout();
        const Path los{cplx(1.0, 0.0), double(4 + trial) * l.delay_bin_s(), double(trial % 5 - 2) * l.doppler_bin_hz(),
                       {}, true};
        auto nlos = draw_nlos_paths(0.1, los, 3, l, rng);
        std::vector<Path> all{los};
        all.insert(all.end(), nlos.begin(), nlos.end());
        double weakest = 1.0;
        for (const auto& p : all)
            weakest = std::min(weakest, std::abs(p.gain));
        Rng unused(0);
        const MfMap map = matched_filter_map(apply_comm_channel(tx, PathSet(all), {}, {1, 1}, 0.0, unused), tx);
        const double peak = map.values.cwiseAbs().maxCoeff();
        const double rel = 0.5 * weakest / std::abs(los.gain) * std::abs(map.values(Eigen::Index(4 + trial),
                                                                                   Eigen::Index(32 + trial % 5 - 2))) /
                           peak;
        const auto det = detect_peaks(map, std::min(rel, 0.99));
        REQUIRE(det.size() == all.size());
        for (const auto& p : all) {
            const auto db = std::size_t(std::llround(p.delay_s / l.delay_bin_s()));
            const long kb = std::lround(p.doppler_hz / l.doppler_bin_hz());
            CHECK(std::any_of(det.begin(), det.end(),
                              [&](const Detection& d) { return d.delay_bin == db && d.doppler_bin == kb; }));
        }
        CHECK_THAT(estimate_nlos_strength(det).e_hat, WithinAbs(PathSet(all).nlos_strength(), 1e-9));
    }
}

TEST_CASE("NLOS strength from two equal peaks")
{
    std::vector<Detection> det(3);
    det[0].is_los = true;
    det[0].magnitude = 5.0;
    det[1].magnitude = 0.5;
    det[2].magnitude = 0.5;
    CHECK_THAT(estimate_nlos_strength(det).e_hat, WithinAbs(0.02, 1e-15));
    det[0].is_los = false;
    CHECK_THROWS_AS(estimate_nlos_strength(det), std::invalid_argument);
    CHECK_THROWS_AS(estimate_nlos_strength({}), std::invalid_argument);
}

TEST_CASE("detect_peaks contract")
{
    MfMap empty;
    CHECK_THROWS_AS(detect_peaks(empty, 0.5), std::invalid_argument);

    MfMap noise;
    Rng rng(7);
    noise.values = oracle::random_matrix(32, 32, rng);
    noise.delay_bin_s = 1.0;
    noise.doppler_bin_hz = 1.0;
    // Only near-ties with the global maximum survive; two such cells are
    // possible on a noise map, so this checks the threshold, not the count.
    const auto spurious = detect_peaks(noise, 0.99);
    CHECK(spurious.size() <= 2);
    for (const auto& d : spurious)
        CHECK(d.magnitude >= 0.99 * noise.values.cwiseAbs().maxCoeff());
    CHECK_THROWS_AS(detect_peaks(noise, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(detect_peaks(noise, 1.0), std::invalid_argument);

    MfMap zero;
    zero.values = Eigen::MatrixXcd::Zero(4, 4);
    CHECK(detect_peaks(zero, 0.5).empty());

    // Two separated peaks ordered by delay, the stronger one later.
    MfMap two;
    two.values = Eigen::MatrixXcd::Zero(16, 16);
    two.values(10, 3) = 4.0;
    two.values(2, 12) = 1.0;
    two.delay_bin_s = 1.0;
    two.doppler_bin_hz = 1.0;
    const auto det = detect_peaks(two, 0.1);
    REQUIRE(det.size() == 2);
    CHECK(det[0].delay_bin == 2);
    CHECK(det[0].is_los);
    CHECK(det[1].delay_bin == 10);
    CHECK(det[1].doppler_bin == 3 - 8);
}

TEST_CASE("matched filter rejects mismatched frames")
{
    CHECK_THROWS_AS(matched_filter_map(qpsk_series(8, 8, 1), qpsk_series(8, 4, 1)), std::invalid_argument);
    const MfMap m = matched_filter_map(qpsk_series(8, 8, 1), qpsk_series(8, 8, 1), 3);
    CHECK(m.delay_bins() == 3);
}

TEST_CASE("MUSIC finds one source within a grid cell")
{
    const UpaConfig arrays{8, 8};
    Rng rng(8);
    int hits = 0;
    for (int t = 0; t < 20; ++t) {
        const auto x = snapshots_for({Direction(0.3, 0.5)}, arrays, 64, 20.0, rng);
        const auto est = estimate_angles(x, 1, arrays, AngleGrid::around(Direction(0.3, 0.5), 0.2));
        REQUIRE(est.size() == 1);
        hits += std::abs(est[0].azimuth() - 0.3) <= 0.01 + 1e-9 && std::abs(est[0].elevation() - 0.5) <= 0.01 + 1e-9;
    }
    CHECK(hits >= 19);
}

TEST_CASE("MUSIC at broadside recovers zero azimuth")
{
    const UpaConfig arrays{4, 4};
    Rng rng(9);
    const auto x = snapshots_for({Direction(0.0, 0.7)}, arrays, 64, 20.0, rng);
    const auto est = estimate_angles(x, 1, arrays);
    REQUIRE(est.size() == 1);
    CHECK(std::abs(est[0].azimuth()) <= 0.01 + 1e-9);
}

TEST_CASE("MUSIC separates two sources 0.2 rad apart")
{
    const UpaConfig arrays{8, 8};
    Rng rng(10);
    const auto x = snapshots_for({Direction(0.3, 0.5), Direction(0.5, 0.5)}, arrays, 128, 20.0, rng);
    auto est = estimate_angles(x, 2, arrays, AngleGrid::around(Direction(0.4, 0.5), 0.3));
    REQUIRE(est.size() == 2);
    std::sort(est.begin(), est.end(), [](const Direction& a, const Direction& b) { return a.azimuth() < b.azimuth(); });
    CHECK(std::abs(est[0].azimuth() - 0.3) <= 0.01 + 1e-9);
    CHECK(std::abs(est[1].azimuth() - 0.5) <= 0.01 + 1e-9);
    CHECK(std::abs(est[0].elevation() - 0.5) <= 0.01 + 1e-9);
    CHECK(std::abs(est[1].elevation() - 0.5) <= 0.01 + 1e-9);
}

TEST_CASE("MUSIC spectrum is invariant to snapshot scaling and global phase")
{
    const UpaConfig arrays{4, 4};
    Rng rng(11);
    const auto x = snapshots_for({Direction(-0.4, 0.9)}, arrays, 32, 15.0, rng);
    const AngleGrid grid = AngleGrid::around(Direction(-0.4, 0.9), 0.1);
    const Eigen::MatrixXd a = music_spectrum(x, 1, arrays, grid);
    const Eigen::MatrixXd b = music_spectrum(x * std::polar(7.0, 1.1), 1, arrays, grid);
    Eigen::Index ra, ca, rb, cb;
    a.maxCoeff(&ra, &ca);
    b.maxCoeff(&rb, &cb);
    CHECK(ra == rb);
    CHECK(ca == cb);
}

TEST_CASE("MUSIC argument checks")
{
    const UpaConfig arrays{2, 2};
    Rng rng(12);
    const auto x = snapshots_for({Direction(0.1, 0.2)}, arrays, 3, 10.0, rng);
    CHECK_THROWS_AS(estimate_angles(x, 0, arrays), std::invalid_argument);
    CHECK_THROWS_AS(estimate_angles(x, 4, arrays), std::invalid_argument);
    CHECK_THROWS_AS(estimate_angles(x.leftCols(1), 2, arrays), std::invalid_argument);
    CHECK_THROWS_AS(sample_covariance(Eigen::MatrixXcd(4, 0)), std::invalid_argument);
}

TEST_CASE("angle grid axes sit on multiples of the step")
{
    const AngleGrid g = AngleGrid::around(Direction(0.305, 0.5), 0.02);
    const auto az = g.azimuths();
    REQUIRE(!az.empty());
    CHECK_THAT(az.front(), WithinAbs(0.29, 1e-12));
    CHECK_THAT(az.back(), WithinAbs(0.32, 1e-12));
    // A centre outside the scan range is pulled onto its edge.
    const AngleGrid up = AngleGrid::around(Direction(0.1, -0.5), 0.05);
    CHECK_THAT(up.elevations().front(), WithinAbs(0.0, 1e-12));
}

TEST_CASE("MF map CSV")
{
    MfMap m;
    m.values = Eigen::MatrixXcd::Zero(2, 4);
    m.values(1, 2) = cplx(3.0, 4.0);
    std::ostringstream os;
    write_mf_map_csv(os, m);
    CHECK(os.str().find("1,0,5\n") != std::string::npos);
    CHECK(os.str().rfind("delay_bin,doppler_bin,magnitude\n", 0) == 0);
}
