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

#include "otfs_isac/sim/plots.hpp"

#include "format.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace otfs_isac::sim {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 200.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v)
{
    // Two decimals are plenty for pixel coordinates and keep files small.
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    os << v;
    return os.str();
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

// 1-2-5 tick step giving roughly `target` intervals.
double nice_step(double span, int target)
{
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double f = raw / mag;
    const double step = f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0;
    return step * mag;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v)
    {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad()
    {
        if (hi - lo < 1e-12) {
            const double d = std::max(std::abs(lo) * 0.1, 1.0);
            lo -= d;
            hi += d;
        }
    }
};

std::string tick_label(double v, double step)
{
    if (std::abs(v) < step * 1e-6)
        v = 0.0;
    return detail::format_double(std::round(v / step * 1e6) / 1e6 * step);
}

} // namespace

void write_svg(std::ostream& os, const Chart& chart)
{
    Range xr;
    Range yr;
    for (const auto& s : chart.series) {
        if (s.x.size() != s.y.size())
            throw std::invalid_argument("write_svg: series '" + s.name + "' has mismatched x / y lengths");
        for (double v : s.x)
            xr.add(v);
        for (double v : s.y)
            yr.add(v);
    }
    if (!std::isfinite(xr.lo) || !std::isfinite(yr.lo))
        throw std::invalid_argument("write_svg: chart has no points");
    xr.pad();
    yr.pad();

    const double xstep = nice_step(xr.hi - xr.lo, 8);
    const double ystep = nice_step(yr.hi - yr.lo, 6);
    xr.lo = std::floor(xr.lo / xstep) * xstep;
    xr.hi = std::ceil(xr.hi / xstep) * xstep;
    yr.lo = std::floor(yr.lo / ystep) * ystep;
    yr.hi = std::ceil(yr.hi / ystep) * ystep;

    double pw = kWidth - kLeft - kRight;
    double ph = kHeight - kTop - kBottom;
    if (chart.equal_aspect) {
        const double sx = pw / (xr.hi - xr.lo);
        const double sy = ph / (yr.hi - yr.lo);
        if (sx > sy)
            pw = sy * (xr.hi - xr.lo);
        else
            ph = sx * (yr.hi - yr.lo);
    }
    auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto py = [&](double y) { return kTop + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << fmt(kLeft + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
       << escape(chart.title) << "</text>\n";

    // grid and ticks
    os << "<g stroke=\"#e0e0e0\">\n";
    for (double x = xr.lo; x <= xr.hi + xstep * 1e-6; x += xstep)
        os << "<line x1=\"" << fmt(px(x)) << "\" y1=\"" << fmt(kTop) << "\" x2=\"" << fmt(px(x)) << "\" y2=\""
           << fmt(kTop + ph) << "\"/>\n";
    for (double y = yr.lo; y <= yr.hi + ystep * 1e-6; y += ystep)
        os << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(py(y)) << "\" x2=\"" << fmt(kLeft + pw)
           << "\" y2=\"" << fmt(py(y)) << "\"/>\n";
    os << "</g>\n";
    os << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\"" << fmt(pw) << "\" height=\""
       << fmt(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double x = xr.lo; x <= xr.hi + xstep * 1e-6; x += xstep)
        os << "<text x=\"" << fmt(px(x)) << "\" y=\"" << fmt(kTop + ph + 16)
           << "\" text-anchor=\"middle\">" << tick_label(x, xstep) << "</text>\n";
    for (double y = yr.lo; y <= yr.hi + ystep * 1e-6; y += ystep)
        os << "<text x=\"" << fmt(kLeft - 6) << "\" y=\"" << fmt(py(y) + 4) << "\" text-anchor=\"end\">"
           << tick_label(y, ystep) << "</text>\n";
    os << "<text x=\"" << fmt(kLeft + pw / 2) << "\" y=\"" << fmt(kTop + ph + 40) << "\" text-anchor=\"middle\">"
       << escape(chart.x_label) << "</text>\n";
    os << "<text transform=\"translate(18," << fmt(kTop + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
       << escape(chart.y_label) << "</text>\n";

    for (std::size_t i = 0; i < chart.series.size(); ++i) {
        const Series& s = chart.series[i];
        const char* color = kPalette[i % std::size(kPalette)];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
        if (s.dashed)
            os << " stroke-dasharray=\"6 4\"";
        os << " points=\"";
        for (std::size_t j = 0; j < s.x.size(); ++j)
            os << (j ? " " : "") << fmt(px(s.x[j])) << ',' << fmt(py(s.y[j]));
        os << "\"/>\n";
        if (s.markers)
            for (std::size_t j = 0; j < s.x.size(); ++j)
                os << "<circle cx=\"" << fmt(px(s.x[j])) << "\" cy=\"" << fmt(py(s.y[j])) << "\" r=\"2.5\" fill=\""
                   << color << "\"/>\n";

        const double ly = kTop + 10 + 18.0 * static_cast<double>(i);
        const double lx = kLeft + pw + 12;
        os << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(lx + 24) << "\" y2=\""
           << fmt(ly) << "\" stroke=\"" << color << "\" stroke-width=\"1.5\""
           << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
        os << "<text x=\"" << fmt(lx + 30) << "\" y=\"" << fmt(ly + 4) << "\">" << escape(s.name) << "</text>\n";
    }
    os << "</svg>\n";
}

namespace {

enum class Axis { snr, e, speed };

double coordinate(const MeanRate& m, Axis a)
{
    switch (a) {
    case Axis::snr: return m.snr_db;
    case Axis::e: return m.e;
    case Axis::speed: return m.speed_kmh.value_or(0.0);
    }
    return 0.0;
}

struct Selection {
    Objective objective;
    Bound bound;
    SystemVariant variant;
    // what to plot: 0 = objective value, 1 = r1, 2 = r2, 3 = r1 + r2
    int quantity = 0;
    std::string name;
    bool dashed = false;
};

Series make_series(const std::vector<MeanRate>& means, Axis axis, const Selection& sel)
{
    Series s;
    s.name = sel.name;
    s.dashed = sel.dashed;
    for (const auto& m : means) {
        if (m.objective != sel.objective || m.bound != sel.bound || m.variant != sel.variant)
            continue;
        s.x.push_back(coordinate(m, axis));
        switch (sel.quantity) {
        case 1: s.y.push_back(m.r1); break;
        case 2: s.y.push_back(m.r2); break;
        case 3: s.y.push_back(m.r1 + m.r2); break;
        default: s.y.push_back(m.rate);
        }
    }
    return s;
}

std::string label(SystemVariant v)
{
    switch (v) {
    case SystemVariant::noma_isac: return "NOMA-ISAC";
    case SystemVariant::noma_no_sensing: return "NOMA w/o sensing";
    case SystemVariant::oma_no_sensing: return "OMA w/o sensing";
    }
    return {};
}

} // namespace

Chart figure_chart(const std::vector<TrialResult>& results, int figure)
{
    if (figure < 5 || figure > 9)
        throw std::invalid_argument("figure_chart: no sweep chart for figure " + std::to_string(figure));
    const Axis axis = figure <= 6 ? Axis::snr : figure <= 8 ? Axis::e : Axis::speed;

    std::vector<MeanRate> all = mean_rates(results);
    if (axis == Axis::speed &&
        std::none_of(all.begin(), all.end(), [](const MeanRate& m) { return m.speed_kmh.has_value(); }))
        throw std::invalid_argument("figure_chart: results carry no fixed speed axis");
    if (all.empty())
        throw std::invalid_argument("figure_chart: empty results");

    // Pin the coordinates off the plotted axis to their first value.
    const MeanRate& ref = all.front();
    std::vector<MeanRate> means;
    for (const auto& m : all) {
        if (axis != Axis::snr && m.snr_db != ref.snr_db)
            continue;
        if (axis != Axis::e && m.e != ref.e)
            continue;
        if (axis != Axis::speed && m.speed_kmh != ref.speed_kmh)
            continue;
        means.push_back(m);
    }
    std::stable_sort(means.begin(), means.end(),
                     [&](const MeanRate& a, const MeanRate& b) { return coordinate(a, axis) < coordinate(b, axis); });

    std::vector<SystemVariant> variants;
    for (const auto& m : means)
        if (std::find(variants.begin(), variants.end(), m.variant) == variants.end())
            variants.push_back(m.variant);
    std::sort(variants.begin(), variants.end());

    std::vector<Selection> sels;
    Chart c;
    c.y_label = "Rate (bits/s/Hz)";
    switch (figure) {
    case 5:
        c.title = "Max-min fairness rate vs SNR";
        c.x_label = "SNR (dB)";
        for (auto v : variants) {
            sels.push_back({Objective::mmf, Bound::perfect, v, 3, label(v) + " overall", false});
            sels.push_back({Objective::mmf, Bound::perfect, v, 1, label(v) + " user 1", true});
        }
        break;
    case 6:
        c.title = "Sum rate vs SNR";
        c.x_label = "SNR (dB)";
        for (auto v : variants)
            sels.push_back({Objective::sr, Bound::perfect, v, 0, label(v), false});
        break;
    case 7:
        c.title = "Rate bounds vs NLOS strength";
        c.x_label = "NLOS strength e";
        for (auto obj : {Objective::mmf, Objective::sr})
            for (auto b : {Bound::upper, Bound::lower}) {
                const std::string name = std::string(obj == Objective::mmf ? "MMF " : "SR ") + std::string(to_string(b));
                sels.push_back({obj, b, SystemVariant::noma_isac, 0, name, b == Bound::lower});
            }
        break;
    case 8:
        c.title = "System comparison vs NLOS strength (lower bound)";
        c.x_label = "NLOS strength e";
        for (auto v : variants)
            for (auto obj : {Objective::sr, Objective::mmf})
                sels.push_back({obj, Bound::lower, v, 3,
                                label(v) + (obj == Objective::sr ? " SR" : " MMF"), obj == Objective::mmf});
        break;
    default:
        c.title = "Rate vs user speed (lower bound)";
        c.x_label = "Speed (km/h)";
        for (auto v : variants)
            for (auto obj : {Objective::mmf, Objective::sr})
                sels.push_back({obj, Bound::lower, v, 0,
                                label(v) + (obj == Objective::sr ? " SR" : " MMF"), obj == Objective::mmf});
        break;
    }
    for (const auto& sel : sels) {
        Series s = make_series(means, axis, sel);
        if (!s.x.empty())
            c.series.push_back(std::move(s));
    }
    if (c.series.empty())
        throw std::invalid_argument("figure_chart: results hold nothing for figure " + std::to_string(figure));
    return c;
}

Chart tracking_chart(const TrackingResult& result)
{
    Chart c;
    c.title = "User trajectory on the ground plane";
    c.x_label = "x (m)";
    c.y_label = "y (m)";
    c.equal_aspect = true;
    auto xy = [](const Track& t, std::string name, bool dashed) {
        Series s;
        s.name = std::move(name);
        s.dashed = dashed;
        s.markers = false;
        for (const auto& p : t.points()) {
            s.x.push_back(p.position.x());
            s.y.push_back(p.position.y());
        }
        return s;
    };
    c.series.push_back(xy(result.truth, "true", false));
    Series raw = xy(result.raw, "raw estimate", true);
    raw.markers = true;
    c.series.push_back(std::move(raw));
    c.series.push_back(xy(result.smoothed, "smoothed", false));
    return c;
}

namespace {

void write_chart(const Chart& chart, const std::filesystem::path& path)
{
    std::ofstream f(path);
    if (!f)
        throw std::runtime_error("cannot write " + path.string());
    write_svg(f, chart);
    if (!f)
        throw std::runtime_error("error writing " + path.string());
}

} // namespace

std::vector<std::filesystem::path> emit_plots(const std::vector<TrialResult>& results,
                                              const std::filesystem::path& dir, const std::vector<int>& figures)
{
    if (results.empty())
        throw std::runtime_error("emit_plots: no results");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
    std::vector<std::filesystem::path> written;
    for (int fig : figures) {
        const auto path = dir / ("fig" + std::to_string(fig) + ".svg");
        write_chart(figure_chart(results, fig), path);
        written.push_back(path);
    }
    return written;
}

void emit_tracking_plot(const TrackingResult& result, const std::filesystem::path& path)
{
    write_chart(tracking_chart(result), path);
}

} // namespace otfs_isac::sim
