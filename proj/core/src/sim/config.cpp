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

#include "otfs_isac/sim/config.hpp"

#include "format.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace otfs_isac::sim {
namespace {

namespace pt = boost::property_tree;
using detail::format_double;

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& raw)
{
    const std::string s = trim(raw);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v))
        throw ConfigError("config key '" + key + "': '" + raw + "' is not a number");
    return v;
}

std::uint64_t parse_uint(const std::string& key, const std::string& raw)
{
    const std::string s = trim(raw);
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ConfigError("config key '" + key + "': '" + raw + "' is not a non-negative integer");
    return v;
}

bool parse_bool(const std::string& key, const std::string& raw)
{
    const std::string s = trim(raw);
    if (s == "true" || s == "1" || s == "yes" || s == "on")
        return true;
    if (s == "false" || s == "0" || s == "no" || s == "off")
        return false;
    throw ConfigError("config key '" + key + "': '" + raw + "' is not a boolean");
}

using Setter = std::function<void(ScenarioConfig&, const std::string& key, const std::string& value)>;

template <typename F>
Setter number(F&& assign)
{
    return [assign](ScenarioConfig& c, const std::string& k, const std::string& v) { assign(c, parse_double(k, v)); };
}

template <typename F>
Setter integer(F&& assign)
{
    return [assign](ScenarioConfig& c, const std::string& k, const std::string& v) { assign(c, parse_uint(k, v)); };
}

template <typename F>
Setter axis(F&& assign)
{
    return [assign](ScenarioConfig& c, const std::string& k, const std::string& v) {
        try {
            assign(c, parse_axis(v));
        } catch (const std::invalid_argument& e) {
            throw ConfigError("config key '" + k + "': " + e.what());
        }
    };
}

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> table = {
        {"frame.m", integer([](auto& c, auto v) { c.frame.m = v; })},
        {"frame.n", integer([](auto& c, auto v) { c.frame.n = v; })},
        {"frame.frame_duration_s", number([](auto& c, auto v) { c.frame.frame_duration_s = v; })},
        {"frame.carrier_hz", number([](auto& c, auto v) { c.frame.carrier_hz = v; })},
        {"frame.sample_interval_s", number([](auto& c, auto v) { c.frame.sample_interval_s = v; })},
        {"frame.guard_doppler", integer([](auto& c, auto v) { c.frame.guard_doppler = v; })},
        {"frame.guard_delay", integer([](auto& c, auto v) { c.frame.guard_delay = v; })},
        {"frame.sensing_waveform",
         [](ScenarioConfig& c, const std::string& k, const std::string& v) {
             const std::string s = trim(v);
             if (s == "pilot")
                 c.frame.waveform = SensingWaveform::pilot;
             else if (s == "qpsk")
                 c.frame.waveform = SensingWaveform::qpsk;
             else
                 throw ConfigError("config key '" + k + "': expected pilot or qpsk");
         }},
        {"arrays.nx", integer([](auto& c, auto v) { c.arrays.nx = v; })},
        {"arrays.ny", integer([](auto& c, auto v) { c.arrays.ny = v; })},
        {"users.d1", number([](auto& c, auto v) { c.users.d1_m = v; })},
        {"users.d2", number([](auto& c, auto v) { c.users.d2_m = v; })},
        {"users.speed_min_kmh", number([](auto& c, auto v) { c.users.speed_min_kmh = v; })},
        {"users.speed_max_kmh", number([](auto& c, auto v) { c.users.speed_max_kmh = v; })},
        {"users.uav_altitude_m", number([](auto& c, auto v) { c.users.uav_altitude_m = v; })},
        {"users.max_bearing_rad", number([](auto& c, auto v) { c.users.max_bearing_rad = v; })},
        {"users.history_slots", integer([](auto& c, auto v) { c.users.history_slots = v; })},
        {"users.estimation_interval_s", number([](auto& c, auto v) { c.users.estimation_interval_s = v; })},
        {"link.gt_db", number([](auto& c, auto v) { c.link.gt_db = v; })},
        {"link.gr_db", number([](auto& c, auto v) { c.link.gr_db = v; })},
        {"link.pt_w", number([](auto& c, auto v) { c.link.pt_w = v; })},
        {"link.csi_age_s", number([](auto& c, auto v) { c.link.csi_age_s = v; })},
        {"link.radar_cross_section", number([](auto& c, auto v) { c.link.radar_cross_section = v; })},
        {"link.detect_threshold", number([](auto& c, auto v) { c.link.detect_threshold = v; })},
        {"link.music_window_rad", number([](auto& c, auto v) { c.link.music_window_rad = v; })},
        {"nlos.e_min", number([](auto& c, auto v) { c.nlos.e_min = v; })},
        {"nlos.e_max", number([](auto& c, auto v) { c.nlos.e_max = v; })},
        {"nlos.path_count", integer([](auto& c, auto v) { c.nlos.path_count = v; })},
        {"nlos.radar_e_scale", number([](auto& c, auto v) { c.nlos.radar_e_scale = v; })},
        {"nlos.min_excess_samples", integer([](auto& c, auto v) { c.nlos.window.min_excess_samples = v; })},
        {"nlos.max_excess_samples", integer([](auto& c, auto v) { c.nlos.window.max_excess_samples = v; })},
        {"nlos.doppler_fraction", number([](auto& c, auto v) { c.nlos.window.doppler_fraction = v; })},
        {"qos.r1_min", number([](auto& c, auto v) { c.qos.r1_min = v; })},
        {"qos.r2_min", number([](auto& c, auto v) { c.qos.r2_min = v; })},
        {"sweep.snr", axis([](auto& c, auto v) { c.sweep.snr_db = std::move(v); })},
        {"sweep.snr_db", axis([](auto& c, auto v) { c.sweep.snr_db = std::move(v); })},
        {"sweep.e", axis([](auto& c, auto v) { c.sweep.e = std::move(v); })},
        {"sweep.speed_kmh", axis([](auto& c, auto v) { c.sweep.speed_kmh = std::move(v); })},
        {"sweep.trials", integer([](auto& c, auto v) { c.sweep.trials = v; })},
        {"sweep.seed", integer([](auto& c, auto v) { c.sweep.seed = v; })},
        {"sweep.oracle_steps", integer([](auto& c, auto v) { c.sweep.oracle_steps = v; })},
        {"sweep.perfect_csi",
         [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.sweep.perfect_csi = parse_bool(k, v); }},
    };
    return table;
}

std::string join_axis(const std::vector<double>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            s += ',';
        s += format_double(v[i]);
    }
    return s;
}

void require(bool ok, const std::string& key, const std::string& why)
{
    if (!ok)
        throw ConfigError("config key '" + key + "': " + why);
}

} // namespace

FrameLayout FrameConfig::layout() const
{
    const FrameTiming timing = sample_interval_s
                                   ? FrameTiming::from_symbol_duration(*sample_interval_s * static_cast<double>(m))
                                   : FrameTiming::from_frame_duration(frame_duration_s, n);
    return {m, n, timing};
}

double FrameConfig::overhead_multiplier() const
{
    const double gd = static_cast<double>(guard_doppler);
    const double gt = static_cast<double>(guard_delay);
    const double mm = static_cast<double>(m);
    const double nn = static_cast<double>(n);
    return 1.0 - (gd * mm + gt * nn - gd * gt) / (mm * nn);
}

LinkBudget ScenarioConfig::budget(double n0) const
{
    LinkBudget b;
    b.g_tx = db_to_linear(link.gt_db);
    b.g_rx = db_to_linear(link.gr_db);
    b.carrier_hz = frame.carrier_hz;
    b.noise_power_w = n0;
    return b;
}

std::vector<double> parse_axis(const std::string& text)
{
    const std::string s = trim(text);
    if (s.empty())
        return {};
    auto num = [](const std::string& t) {
        const std::string u = trim(t);
        double v = 0.0;
        const auto res = std::from_chars(u.data(), u.data() + u.size(), v);
        if (u.empty() || res.ec != std::errc{} || res.ptr != u.data() + u.size() || !std::isfinite(v))
            throw std::invalid_argument("'" + t + "' is not a number");
        return v;
    };

    std::vector<double> out;
    if (s.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(s);
        for (std::string p; std::getline(ss, p, ':');)
            parts.push_back(p);
        if (parts.size() != 3)
            throw std::invalid_argument("range must look like start:step:stop");
        const double a = num(parts[0]);
        const double step = num(parts[1]);
        const double b = num(parts[2]);
        if (!(step > 0.0) || b < a)
            throw std::invalid_argument("range needs step > 0 and stop >= start");
        const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
        if (count > 100000)
            throw std::invalid_argument("range has too many points");
        for (std::size_t i = 0; i < count; ++i)
            out.push_back(a + static_cast<double>(i) * step);
        return out;
    }
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ',');)
        out.push_back(num(p));
    return out;
}

ScenarioConfig default_config()
{
    ScenarioConfig c;
    c.sweep.snr_db = parse_axis("0:5:40");
    c.sweep.e = {0.0};
    return c;
}

void validate(const ScenarioConfig& c)
{
    require(c.frame.m >= 2, "frame.m", "must be at least 2");
    require(c.frame.n >= 2, "frame.n", "must be at least 2");
    require(c.frame.frame_duration_s > 0.0, "frame.frame_duration_s", "must be positive");
    require(c.frame.carrier_hz > 0.0, "frame.carrier_hz", "must be positive");
    require(!c.frame.sample_interval_s || *c.frame.sample_interval_s > 0.0, "frame.sample_interval_s",
            "must be positive");
    require(c.frame.guard_doppler < c.frame.n, "frame.guard_doppler", "must be smaller than N");
    require(c.frame.guard_delay < c.frame.m, "frame.guard_delay", "must be smaller than M");
    require(c.arrays.nx >= 1, "arrays.nx", "must be at least 1");
    require(c.arrays.ny >= 1, "arrays.ny", "must be at least 1");
    require(c.arrays.nx * c.arrays.ny >= 2, "arrays.nx", "array needs at least two elements for MUSIC");
    require(c.users.d1_m > c.users.uav_altitude_m, "users.d1", "must exceed the UAV altitude");
    require(c.users.d2_m > c.users.uav_altitude_m, "users.d2", "must exceed the UAV altitude");
    require(c.users.uav_altitude_m > 0.0, "users.uav_altitude_m", "must be positive");
    require(c.users.speed_min_kmh > 0.0, "users.speed_min_kmh", "must be positive");
    require(c.users.speed_max_kmh >= c.users.speed_min_kmh, "users.speed_max_kmh", "must be >= speed_min_kmh");
    require(c.users.max_bearing_rad > 0.0 && c.users.max_bearing_rad < kPi / 2, "users.max_bearing_rad",
            "must lie in (0, pi/2)");
    require(c.users.history_slots >= 1, "users.history_slots", "must be at least 1");
    require(c.users.estimation_interval_s > 0.0, "users.estimation_interval_s", "must be positive");
    require(c.link.pt_w > 0.0, "link.pt_w", "must be positive");
    require(!c.link.csi_age_s || *c.link.csi_age_s >= 0.0, "link.csi_age_s", "must be non-negative");
    require(c.link.radar_cross_section > 0.0, "link.radar_cross_section", "must be positive");
    require(c.link.detect_threshold > 0.0 && c.link.detect_threshold < 1.0, "link.detect_threshold",
            "must lie in (0, 1)");
    require(c.link.music_window_rad > 0.0, "link.music_window_rad", "must be positive");
    require(c.nlos.e_min >= 0.0, "nlos.e_min", "must be non-negative");
    require(c.nlos.e_max >= c.nlos.e_min, "nlos.e_max", "must be >= e_min");
    require(c.nlos.path_count >= 1, "nlos.path_count", "must be at least 1");
    require(c.nlos.radar_e_scale >= 0.0, "nlos.radar_e_scale", "must be non-negative");
    require(c.nlos.window.min_excess_samples >= 1, "nlos.min_excess_samples", "must be at least 1");
    require(c.nlos.window.max_excess_samples >= c.nlos.window.min_excess_samples, "nlos.max_excess_samples",
            "must be >= min_excess_samples");
    require(c.nlos.window.doppler_fraction >= 0.0 && c.nlos.window.doppler_fraction <= 1.0, "nlos.doppler_fraction",
            "must lie in [0, 1]");
    require(c.qos.r1_min >= 0.0, "qos.r1_min", "must be non-negative");
    require(c.qos.r2_min >= 0.0, "qos.r2_min", "must be non-negative");
    require(!c.sweep.snr_db.empty(), "sweep.snr", "needs at least one point");
    require(!c.sweep.e.empty(), "sweep.e", "needs at least one point");
    for (double e : c.sweep.e)
        require(e >= 0.0, "sweep.e", "values must be non-negative");
    for (double v : c.sweep.speed_kmh)
        require(v >= 0.0, "sweep.speed_kmh", "values must be non-negative");
    require(c.sweep.trials >= 1, "sweep.trials", "must be at least 1");
    require(c.sweep.oracle_steps >= 1000, "sweep.oracle_steps", "must be at least 1000");
}

ScenarioConfig parse_config(const std::string& text)
{
    pt::ptree tree;
    std::istringstream is(text);
    try {
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("config parse error at line " + std::to_string(e.line()) + ": " + e.message());
    }

    ScenarioConfig cfg = default_config();
    const auto& table = setters();
    for (const auto& [section, body] : tree) {
        if (!body.data().empty())
            throw ConfigError("config key '" + section + "' must live inside a [section]");
        for (const auto& [key, value] : body) {
            const std::string full = section + "." + key;
            const auto it = table.find(full);
            if (it == table.end())
                throw ConfigError("unknown config key '" + full + "'");
            it->second(cfg, full, value.data());
        }
    }
    validate(cfg);
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void apply_desk_scale(ScenarioConfig& cfg)
{
    constexpr std::size_t kDesk = 64;
    const double dt = cfg.frame.layout().delay_bin_s();
    const auto scale = [](std::size_t guard, std::size_t from) {
        return static_cast<std::size_t>(std::llround(static_cast<double>(guard) * kDesk / static_cast<double>(from)));
    };
    cfg.frame.guard_doppler = scale(cfg.frame.guard_doppler, cfg.frame.n);
    cfg.frame.guard_delay = scale(cfg.frame.guard_delay, cfg.frame.m);
    cfg.frame.sample_interval_s = dt;
    cfg.frame.m = kDesk;
    cfg.frame.n = kDesk;
}

std::string to_ini(const ScenarioConfig& c)
{
    std::ostringstream os;
    os << "[frame]\n"
       << "m = " << c.frame.m << "\nn = " << c.frame.n << "\nframe_duration_s = " << format_double(c.frame.frame_duration_s)
       << "\ncarrier_hz = " << format_double(c.frame.carrier_hz) << '\n';
    if (c.frame.sample_interval_s)
        os << "sample_interval_s = " << format_double(*c.frame.sample_interval_s) << '\n';
    os << "guard_doppler = " << c.frame.guard_doppler << "\nguard_delay = " << c.frame.guard_delay
       << "\nsensing_waveform = " << (c.frame.waveform == SensingWaveform::pilot ? "pilot" : "qpsk") << "\n\n";
    os << "[arrays]\nnx = " << c.arrays.nx << "\nny = " << c.arrays.ny << "\n\n";
    os << "[users]\nd1 = " << format_double(c.users.d1_m) << "\nd2 = " << format_double(c.users.d2_m)
       << "\nspeed_min_kmh = " << format_double(c.users.speed_min_kmh)
       << "\nspeed_max_kmh = " << format_double(c.users.speed_max_kmh)
       << "\nuav_altitude_m = " << format_double(c.users.uav_altitude_m)
       << "\nmax_bearing_rad = " << format_double(c.users.max_bearing_rad)
       << "\nhistory_slots = " << c.users.history_slots
       << "\nestimation_interval_s = " << format_double(c.users.estimation_interval_s) << "\n\n";
    os << "[link]\ngt_db = " << format_double(c.link.gt_db) << "\ngr_db = " << format_double(c.link.gr_db)
       << "\npt_w = " << format_double(c.link.pt_w) << "\ncsi_age_s = " << format_double(c.csi_age_s())
       << "\nradar_cross_section = " << format_double(c.link.radar_cross_section)
       << "\ndetect_threshold = " << format_double(c.link.detect_threshold)
       << "\nmusic_window_rad = " << format_double(c.link.music_window_rad) << "\n\n";
    os << "[nlos]\ne_min = " << format_double(c.nlos.e_min) << "\ne_max = " << format_double(c.nlos.e_max)
       << "\npath_count = " << c.nlos.path_count << "\nradar_e_scale = " << format_double(c.nlos.radar_e_scale)
       << "\nmin_excess_samples = " << c.nlos.window.min_excess_samples
       << "\nmax_excess_samples = " << c.nlos.window.max_excess_samples
       << "\ndoppler_fraction = " << format_double(c.nlos.window.doppler_fraction) << "\n\n";
    os << "[qos]\nr1_min = " << format_double(c.qos.r1_min) << "\nr2_min = " << format_double(c.qos.r2_min) << "\n\n";
    os << "[sweep]\nsnr = " << join_axis(c.sweep.snr_db) << "\ne = " << join_axis(c.sweep.e)
       << "\nspeed_kmh = " << join_axis(c.sweep.speed_kmh) << "\ntrials = " << c.sweep.trials
       << "\nseed = " << c.sweep.seed << "\noracle_steps = " << c.sweep.oracle_steps
       << "\nperfect_csi = " << (c.sweep.perfect_csi ? "true" : "false") << '\n';
    return os.str();
}

} // namespace otfs_isac::sim
