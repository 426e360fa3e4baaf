// SPDX-License-Identifier: Apache-2.0
//
// csjcs - compressive-sidelobe joint communication and sensing
// Copyright (C) 2026 The csjcs authors
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

// Command-line front end. Exit codes: 0 success, 2 config error, 1 runtime error.

#pragma once

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "csjcs/io.hpp"

namespace csjcs {

namespace detail {

/// "a:b:c" -> grid from a to c in steps of b.
inline AngleGrid parse_grid(const std::string& spec)
{
    std::vector<double> v;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("--grid", "expected min:step:max, got '" + spec + "'");
        }
    }
    if (v.size() != 3) throw ConfigError("--grid", "expected min:step:max, got '" + spec + "'");
    AngleGrid g{v[0], v[2], v[1]};
    if (!(g.step_deg > 0.0) || g.min_deg < -90.0 || g.max_deg > 90.0 || g.max_deg < g.min_deg)
        throw ConfigError("--grid", "need -90 <= min <= max <= 90 and step > 0");
    return g;
}

struct CommonOptions {
    std::string config_path;
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> threads;
    std::string out;
};

inline json load_with_overrides(const CommonOptions& o)
{
    json doc = o.config_path.empty() ? json::object() : read_json_file(o.config_path);
    for (const auto& s : o.sets) apply_override(doc, s);
    return doc;
}

inline ExperimentConfig experiment_config(const CommonOptions& o)
{
    json doc = load_with_overrides(o);
    if (o.seed) doc["seed"] = *o.seed;
    if (o.threads) doc["threads"] = *o.threads;
    return config_from_json(doc);
}

inline std::string sweep_summary_csv(const SweepResult& s, const std::vector<std::string>& dirs)
{
    std::string out = "param,value,mean_error,std_error,p90_error,mean_ber,mean_ber_full,mean_rx_power,trials,result_dir\n";
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        const Aggregates& a = s.points[i].aggregates;
        out += s.param + "," + fmt_double(s.values[i]) + "," + fmt_double(a.mean_error) + "," +
               fmt_double(a.std_error) + "," + fmt_double(a.p90_error) + "," + fmt_double(a.mean_ber) + "," +
               fmt_double(a.mean_ber_full) + "," + fmt_double(a.mean_rx_power) + "," + std::to_string(a.count) +
               "," + dirs[i] + "\n";
    }
    return out;
}

inline void add_common(CLI::App* app, CommonOptions& o, bool seed_required)
{
    app->add_option("--config", o.config_path, "JSON config file");
    app->add_option("--set", o.sets, "override a config key: dotted.key=value (repeatable)");
    auto* seed = app->add_option("--seed", o.seed, "master seed");
    if (seed_required) seed->required();
    app->add_option("--threads", o.threads, "cap on worker threads");
    app->add_option("--out", o.out, "output root (default: $CSJCS_OUT or ./results)");
}

inline int cmd_pattern(const CommonOptions& o, const std::string& grid_spec)
{
    const json doc = load_with_overrides(o);
    SidelobeCodebook cb;
    if (doc.contains("subsets")) {
        cb = codebook_from_json(doc);
    } else {
        // A codebook recipe: {n, L, M, mainlobe_deg, spacing_wl}.
        detail::ObjectReader r(doc, "");
        const auto n = r.get<std::size_t>("n", 16);
        const auto L = r.get<std::size_t>("L", 12);
        const auto M = r.get<std::size_t>("M", 189);
        const auto th0 = r.get<double>("mainlobe_deg", 0.0);
        const auto d = r.get<double>("spacing_wl", 0.5);
        r.finish();
        if (!o.seed) throw ConfigError("--seed", "required when the codebook is sampled");
        cb = wrap_domain("", [&] { return sample_codebook(ArrayGeometry(n, d), th0, L, M, *o.seed); });
    }
    const AngleGrid grid = parse_grid(grid_spec);
    const auto pts = grid.points();

    RunManifest man(resolve_output_root(o.out), "pattern", doc, cb.seed);
    man.add_output(man.dir() / "codebook.json", to_json(cb).dump(2) + "\n");
    man.add_output(man.dir() / "pattern.csv", pattern_csv(cb, pts));
    man.complete();
    std::cout << (man.dir() / "pattern.csv").string() << "\n";
    return 0;
}

inline int cmd_jcs(const CommonOptions& o)
{
    const ExperimentConfig cfg = experiment_config(o);
    const TrialSetup setup = prepare_trial(cfg, cfg.seed, 0);
    const JcsResult res = run_jcs(setup.jcs);
    const std::vector<double> truth = codebook_side_nlos_deg(setup.channel, cfg.side);
    const double penalty = 0.5 * (cfg.grid.max_deg - cfg.grid.min_deg);
    const double err = matched_error(truth, res.estimate.angles_deg, penalty, cfg.fold_mirror, res.los_deg);

    RunManifest man(resolve_output_root(o.out), "jcs", to_json(cfg), cfg.seed);
    json summary{{"ber", res.ber},
                 {"bit_errors", res.bit_errors},
                 {"num_bits", res.num_bits},
                 {"true_angles", truth},
                 {"est_angles", res.estimate.angles_deg},
                 {"est_scores", res.estimate.scores},
                 {"fewer_than_requested", res.estimate.fewer_than_requested},
                 {"abs_error_deg", err},
                 {"a_ml", {res.fingerprint.a_ml.real(), res.fingerprint.a_ml.imag()}},
                 {"channel", to_json(setup.channel)},
                 {"config", to_json(cfg)}};
    man.add_output(man.dir() / "spectrum.csv", spectrum_csv(res.spectrum));
    man.add_output(man.dir() / "fingerprint.csv", fingerprint_csv(res.fingerprint));
    man.add_output(man.dir() / "codebook.json", to_json(res.capture.codebook).dump(2) + "\n");
    man.add_output(man.dir() / "jcs.json", summary.dump(2) + "\n");
    man.complete();
    std::cout << "ber " << res.ber << "\n";
    std::cout << "est_angles";
    for (double a : res.estimate.angles_deg) std::cout << " " << a;
    std::cout << "\ntrue_angles";
    for (double a : truth) std::cout << " " << a;
    std::cout << "\n" << man.dir().string() << "\n";
    return 0;
}

inline void print_point(const std::string& label, const Aggregates& a)
{
    std::printf("%-16s mean %.3f  std %.3f  p90 %.3f  ber %.3g  (n=%zu)\n", label.c_str(), a.mean_error,
                a.std_error, a.p90_error, a.mean_ber, a.count);
}

inline int cmd_sweep(const CommonOptions& o, const std::string& kind)
{
    const ExperimentConfig cfg = experiment_config(o);
    RunManifest man(resolve_output_root(o.out), "sweep " + kind, to_json(cfg), cfg.seed);

    auto need = [&](bool nonempty, const char* key) {
        if (!nonempty) throw ConfigError(key, std::string("required by sweep ") + kind);
    };
    auto finish_sweep = [&](const SweepResult& s) {
        std::vector<std::string> dirs;
        for (const auto& p : s.points) {
            dirs.push_back(std::filesystem::relative(write_result(man, p), man.dir()).generic_string());
            print_point(s.param + "=" + fmt_double(s.values[dirs.size() - 1]), p.aggregates);
        }
        man.add_output(man.dir() / "sweep.csv", sweep_summary_csv(s, dirs));
        const TrendCheck tc = check_non_increasing(s);
        man.set("trend_non_increasing", tc.ok);
    };

    if (kind == "beams") {
        need(!cfg.M_list.empty(), "M_list");
        finish_sweep(sweep_beams(cfg, cfg.M_list));
    } else if (kind == "symbols") {
        need(!cfg.N_list.empty(), "N_list");
        finish_sweep(sweep_symbols(cfg, cfg.N_list));
    } else if (kind == "off_antennas") {
        need(!cfg.off_list.empty(), "off_list");
        finish_sweep(wrap_domain("off_list", [&] { return sweep_off_antennas(cfg, cfg.off_list); }));
    } else if (kind == "tx_beamwidth") {
        need(!cfg.n_tx_list.empty(), "n_tx_list");
        finish_sweep(sweep_tx_beamwidth(cfg, cfg.n_tx_list));
    } else if (kind == "snr") {
        need(!cfg.snr_list_db.empty(), "snr_list_db");
        finish_sweep(sweep_snr(cfg, cfg.snr_list_db));
    } else if (kind == "array_size") {
        need(!cfg.sizes.empty(), "sizes");
        const auto rows = sweep_array_size(cfg, cfg.sizes);
        std::string csv = "size,off,mean_error,std_error,p90_error,trials,reached_target,result_dir\n";
        json table = json::array();
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.results.size(); ++i) {
                const auto dir = write_result(man, row.results[i]);
                const Aggregates& a = row.results[i].aggregates;
                csv += std::to_string(row.size) + "," + std::to_string(row.off_tested[i]) + "," +
                       fmt_double(a.mean_error) + "," + fmt_double(a.std_error) + "," + fmt_double(a.p90_error) +
                       "," + std::to_string(a.count) + "," + (a.mean_error <= cfg.target_error_deg ? "1" : "0") +
                       "," + std::filesystem::relative(dir, man.dir()).generic_string() + "\n";
                print_point("n=" + std::to_string(row.size) + " off=" + std::to_string(row.off_tested[i]), a);
            }
            table.push_back({{"size", row.size},
                             {"min_off", row.min_off == 0 ? json(nullptr) : json(row.min_off)}});
        }
        man.add_output(man.dir() / "array_size.csv", csv);
        man.set("min_off", table);
    } else if (kind == "side") {
        const SidePair pair = sweep_side(cfg, cfg.side_mirrored);
        const auto rx_dir = write_result(man, pair.rx);
        const auto tx_dir = write_result(man, pair.tx);
        std::string csv = "side,mean_error,std_error,p90_error,trials,result_dir\n";
        for (const auto& [name, r, dir] : {std::tuple{"rx_codebook", &pair.rx, rx_dir},
                                           std::tuple{"tx_codebook", &pair.tx, tx_dir}}) {
            const Aggregates& a = r->aggregates;
            csv += std::string(name) + "," + fmt_double(a.mean_error) + "," + fmt_double(a.std_error) + "," +
                   fmt_double(a.p90_error) + "," + std::to_string(a.count) + "," +
                   std::filesystem::relative(dir, man.dir()).generic_string() + "\n";
            print_point(name, a);
        }
        man.add_output(man.dir() / "side.csv", csv);
    } else {
        throw ConfigError("sweep", "unknown kind '" + kind +
                                       "' (beams, symbols, off_antennas, array_size, side, tx_beamwidth, snr)");
    }
    man.complete();
    std::cout << man.dir().string() << "\n";
    return 0;
}

inline int cmd_margin(std::size_t n, std::size_t L, double mainlobe, double spacing, const std::string& region,
                      double half_width, double limit, double step, std::size_t cap, std::optional<std::uint64_t> seed)
{
    MarginOptions opt;
    if (region == "full_null")
        opt.region.kind = SidelobeRegion::Kind::OutsideFullArrayMainBeam;
    else if (region == "window")
        opt.region.kind = SidelobeRegion::Kind::OutsideWindow;
    else
        throw ConfigError("--region", "expected 'full_null' or 'window'");
    opt.region.half_width_deg = half_width;
    opt.region.limit_deg = limit;
    opt.grid_step_deg = step;
    opt.enumeration_cap = cap;
    const ArrayGeometry geom = wrap_domain("--n", [&] { return ArrayGeometry(n, spacing); });
    if (L == 0 || L >= n) throw ConfigError("--l", "need 1 <= L < N");
    if (randomness_space_size(n, L) > static_cast<BigCount>(cap)) {
        if (!seed) throw ConfigError("--seed", "required when C(N, L) exceeds the enumeration cap");
        opt.seed = *seed;
    }
    const MarginReport rep = wrap_domain("", [&] { return margin_report(geom, L, mainlobe, opt); });
    std::printf("min_margin_db %.4f\n", rep.min_margin_db);
    std::printf("mean_margin_db %.4f\n", rep.mean_margin_db);
    std::printf("subsets_evaluated %llu (%s)\n", static_cast<unsigned long long>(rep.subsets_evaluated), rep.exhaustive ? "exhaustive" : "sampled");
    std::printf("worst_angle_deg %.2f\n", rep.worst_angle_deg);
    std::printf("worst_subset");
    for (std::size_t i : rep.worst_subset.indices) std::printf(" %zu", i);
    std::printf("\n");
    return 0;
}

} // namespace detail

inline int cli_main(int argc, char** argv)
{
    CLI::App app{"csjcs: compressive-sidelobe joint communication and sensing simulator"};
    app.require_subcommand(1);

    detail::CommonOptions pattern_opts, jcs_opts, sweep_opts;
    std::string grid_spec = "-50:0.25:50";
    auto* pattern = app.add_subcommand("pattern", "dump |R(m, theta)| for a codebook as CSV");
    detail::add_common(pattern, pattern_opts, false);
    pattern->add_option("--grid", grid_spec, "angle grid min:step:max in degrees");

    auto* jcs = app.add_subcommand("jcs", "one joint detection and sensing run");
    detail::add_common(jcs, jcs_opts, true);

    std::string kind;
    auto* sweep_cmd = app.add_subcommand("sweep", "parameter sweep");
    sweep_cmd->add_option("kind", kind, "beams | symbols | off_antennas | array_size | side | tx_beamwidth | snr")
        ->required();
    detail::add_common(sweep_cmd, sweep_opts, true);

    double fs = 0.0, rn = 0.0, rm = 0.0;
    auto* rates = app.add_subcommand("rates", "beam switching and sensing rates");
    rates->add_option("--fs", fs, "symbol rate in Hz")->required();
    rates->add_option("--n", rn, "symbols per beam")->required();
    rates->add_option("--m", rm, "beams per sensing frame")->required();

    std::size_t mn = 16, ml = 12, mcap = 200000;
    double mtheta = 0.0, mspacing = 0.5, mhalf = 10.0, mlimit = 90.0, mstep = 0.1;
    std::string mregion = "full_null";
    std::optional<std::uint64_t> mseed;
    auto* margin = app.add_subcommand("margin", "minimum mainlobe-to-sidelobe margin over all subsets");
    margin->add_option("--n", mn, "array size");
    margin->add_option("--l", ml, "ON antennas per beam");
    margin->add_option("--mainlobe", mtheta, "mainlobe angle, deg from broadside");
    margin->add_option("--spacing", mspacing, "element spacing in wavelengths");
    margin->add_option("--region", mregion, "full_null | window");
    margin->add_option("--half-width", mhalf, "window half-width in deg (region=window)");
    margin->add_option("--limit", mlimit, "largest |angle| scanned, deg");
    margin->add_option("--step", mstep, "scan step, deg");
    margin->add_option("--cap", mcap, "enumerate exhaustively up to this many subsets");
    margin->add_option("--seed", mseed, "seed for sampling above the cap");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*pattern) return detail::cmd_pattern(pattern_opts, grid_spec);
        if (*jcs) return detail::cmd_jcs(jcs_opts);
        if (*sweep_cmd) return detail::cmd_sweep(sweep_opts, kind);
        if (*rates) {
            const Rates r = detail::wrap_domain("rates", [&] { return rate_calculator(fs, rn, rm); });
            std::printf("beam_switch_rate_hz %.3g\n", r.beam_switch_rate_hz);
            std::printf("sensing_rate_hz %.3g\n", r.sensing_rate_hz);
            return 0;
        }
        if (*margin)
            return detail::cmd_margin(mn, ml, mtheta, mspacing, mregion, mhalf, mlimit, mstep, mcap, mseed);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

} // namespace csjcs
