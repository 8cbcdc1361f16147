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

// simulate: run a rate sweep or the tracking experiment and write
// results.csv, SVG plots and a manifest into the output directory.

#include "otfs_isac/sim/config.hpp"
#include "otfs_isac/sim/harness.hpp"
#include "otfs_isac/sim/plots.hpp"
#include "otfs_isac/sim/tracking.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace otfs_isac;
using namespace otfs_isac::sim;

namespace {

void write_manifest(const fs::path& path, const std::string& ini, const std::vector<std::string>& extra)
{
    std::ofstream f(path);
    if (!f)
        throw std::runtime_error("cannot write " + path.string());
    f << "# simulate " << OTFS_ISAC_DESCRIBE << "\n";
    for (const auto& line : extra)
        f << "# " << line << "\n";
    f << ini;
}

std::vector<int> auto_figures(const ScenarioConfig& cfg)
{
    std::vector<int> figs;
    if (cfg.sweep.snr_db.size() > 1)
        figs.insert(figs.end(), {5, 6});
    if (cfg.sweep.e.size() > 1)
        figs.insert(figs.end(), {7, 8});
    if (cfg.sweep.speed_kmh.size() > 1)
        figs.push_back(9);
    return figs;
}

int run(int argc, char** argv)
{
    CLI::App app{"OTFS-ISAC NOMA link-level simulator"};
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    bool desk = false;
    bool paper = false;
    std::string variant = "all";
    std::optional<int> figure;
    bool quiet = false;

    app.add_option("--config", config_path, "INI scenario file (omitted keys keep the defaults)")
        ->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "Output directory")->capture_default_str();
    app.add_option("--seed", seed, "Master seed (overrides [sweep] seed)");
    app.add_option("--trials", trials, "Trials per sweep point")->check(CLI::PositiveNumber);
    auto* desk_flag = app.add_flag("--desk", desk, "64 x 64 frame (default)");
    app.add_flag("--paper-scale", paper, "1024 x 1024 frame")->excludes(desk_flag);
    app.add_option("--variant", variant, "all|noma_isac|noma_no_sensing|oma_no_sensing")->capture_default_str();
    app.add_option("--figure", figure, "Figure preset")->check(CLI::Range(4, 9));
    app.add_flag("-q,--quiet", quiet, "No progress output");
    CLI11_PARSE(app, argc, argv);

    ScenarioConfig cfg = config_path.empty() ? default_config() : load_config(config_path);
    if (!paper)
        apply_desk_scale(cfg);
    if (seed)
        cfg.sweep.seed = *seed;
    if (trials)
        cfg.sweep.trials = *trials;

    RunOptions opts;
    if (variant != "all")
        opts.variants = {variant_from_string(variant)};

    const fs::path out(out_dir);
    fs::create_directories(out);
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::string> extra{std::string("seed = ") + std::to_string(cfg.sweep.seed),
                                   std::string("scale = ") + (paper ? "paper" : "desk")};

    if (figure && *figure == 4) {
        TrackingConfig tc;
        tc.seed = cfg.sweep.seed;
        const TrackingResult r = run_tracking(cfg, tc);
        {
            std::ofstream f(out / "track.csv");
            write_track_csv(f, r.truth, r.smoothed);
            if (!f)
                throw std::runtime_error("cannot write " + (out / "track.csv").string());
        }
        emit_tracking_plot(r, out / "fig4.svg");
        extra.push_back("figure = 4");
        write_manifest(out / "manifest", to_ini(cfg), extra);
        std::cout << "raw range error " << r.raw_error_pct << " %, smoothed " << r.smoothed_error_pct << " %, "
                  << r.missed_looks << " missed looks\n";
        return 0;
    }

    std::vector<int> figs;
    if (figure) {
        cfg = figure_preset(cfg, *figure);
        figs = {*figure};
        opts.experiment = "fig" + std::to_string(*figure);
        extra.push_back("figure = " + std::to_string(*figure));
    } else {
        figs = auto_figures(cfg);
    }
    validate(cfg);

    if (!quiet)
        opts.progress = [](std::size_t done, std::size_t total) {
            if (done == total || done % 50 == 0)
                std::cerr << "\r" << done << "/" << total << std::flush;
            if (done == total)
                std::cerr << "\n";
        };
    const auto results = run_sweep(cfg, opts);
    emit_csv(results, out / "results.csv");
    const auto plots = emit_plots(results, out, figs);
    write_manifest(out / "manifest", to_ini(cfg), extra);

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << results.size() << " rows -> " << (out / "results.csv").string();
    for (const auto& p : plots)
        std::cout << ", " << p.filename().string();
    std::cout << " (" << secs << " s)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "simulate: " << e.what() << "\n";
        return 1;
    }
}
