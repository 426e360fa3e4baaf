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

// Seeded Monte-Carlo harness. Every trial derives its own seed from
// (point seed, trial index), so results do not depend on the thread count.

#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "csjcs/jcs.hpp"

namespace csjcs {

struct NoiseSpec {
    enum class Mode { Sigma, Snr };
    /// Link: |amp_0| N_tx N_rx / sigma, the all-ON directional link.
    /// Element: |amp_0| / sigma, per antenna pair before any array gain.
    enum class Reference { Link, Element };

    Mode mode = Mode::Sigma;
    double sigma = 0.0;
    double snr_db = 30.0;
    Reference reference = Reference::Link;

    bool operator==(const NoiseSpec&) const = default;
};

struct SceneSpec {
    /// Random: fresh reflector placement per trial.
    /// Pinned: the same `layout` scene every trial.
    /// Paths:  the same explicit `paths` channel every trial.
    enum class Mode { Random, Pinned, Paths };

    Mode mode = Mode::Random;
    double los_distance_m = 2.0;
    std::size_t num_reflectors = 1;
    double gamma_mag = 0.5;
    double fov_deg = 45.0;
    double path_factor_min = 1.2; // path length range, in units of the LOS distance
    double path_factor_max = 3.0;
    double min_reflector_separation_deg = 0.0;
    double wavelength_m = kSpeedOfLight / 60e9;
    bool mirror = false; // swap node roles after drawing (see mirror_roles)
    Scene layout;
    Channel paths;

    bool operator==(const SceneSpec&) const = default;
};

struct ExperimentConfig {
    std::size_t n_tx = 1;
    std::size_t n_rx = 16;
    std::size_t L = 12;
    std::size_t M = 189;
    std::size_t N = 100;
    double spacing_wl = 0.5;
    Modulation scheme = Modulation::QAM4;
    NoiseSpec noise;
    SceneSpec scene;
    EstimatorVariant variant = EstimatorVariant::NonCoherent;
    SpectrumNorm norm = SpectrumNorm::Centered;
    AngleGrid grid;
    double exclusion_deg = 3.3;
    double min_separation_deg = 5.0;
    std::size_t num_peaks = 0; // 0: one per reflector
    bool fold_mirror = false;  // score the better of est and its mirror about the mainlobe
    std::size_t preamble_len = 16;
    bool genie_symbols = false;
    double beam_phase_std_rad = 0.0;
    bool compare_full_array = false; // also detect the payload under the all-ON beam
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    CodebookSide side = CodebookSide::Rx;
    std::size_t threads = 0; // 0: hardware concurrency

    // Sweep axes, consumed by the matching sweep kind.
    std::vector<std::size_t> M_list;
    std::vector<std::size_t> N_list;
    std::vector<std::size_t> off_list;
    std::vector<std::size_t> sizes;
    std::vector<std::size_t> n_tx_list;
    std::vector<double> snr_list_db;
    double target_error_deg = 2.0;
    bool side_mirrored = true;

    std::size_t codebook_elements() const { return side == CodebookSide::Rx ? n_rx : n_tx; }

    bool operator==(const ExperimentConfig&) const = default;

    void validate() const
    {
        if (n_tx == 0 || n_rx == 0) throw std::domain_error("config: n_tx and n_rx must be >= 1");
        if (L == 0 || L > codebook_elements())
            throw std::domain_error("config: L = " + std::to_string(L) + " must be in [1, " +
                                    std::to_string(codebook_elements()) + "] on the codebook side");
        if (M == 0 || N == 0) throw std::domain_error("config: M and N must be >= 1");
        if (trials == 0) throw std::domain_error("config: trials must be >= 1");
        if (!(spacing_wl > 0.0)) throw std::domain_error("config: spacing_wl must be > 0");
        if (noise.mode == NoiseSpec::Mode::Sigma && !(noise.sigma >= 0.0))
            throw std::domain_error("config: noise.sigma must be >= 0");
        if (noise.mode == NoiseSpec::Mode::Snr && !std::isfinite(noise.snr_db))
            throw std::domain_error("config: noise.snr_db must be finite");
        if (!(grid.step_deg > 0.0) || grid.min_deg < -90.0 || grid.max_deg > 90.0 || grid.max_deg <= grid.min_deg)
            throw std::domain_error("config: grid must satisfy -90 <= min < max <= 90 and step > 0");
        if (!(exclusion_deg >= 0.0) || !(min_separation_deg >= 0.0))
            throw std::domain_error("config: exclusion_deg and min_separation_deg must be >= 0");
        if (preamble_len == 0 && !genie_symbols)
            throw std::domain_error("config: preamble_len must be >= 1 unless genie_symbols is set");
        if (!(beam_phase_std_rad >= 0.0)) throw std::domain_error("config: beam_phase_std_rad must be >= 0");
        if (scene.mode == SceneSpec::Mode::Random) {
            if (!(scene.los_distance_m > 0.0)) throw std::domain_error("config: scene.los_distance_m must be > 0");
            if (!(scene.fov_deg > 0.0) || scene.fov_deg >= 90.0)
                throw std::domain_error("config: scene.fov_deg must be in (0, 90)");
            if (!(scene.path_factor_min > 1.0) || scene.path_factor_max < scene.path_factor_min)
                throw std::domain_error("config: scene path factors need 1 < min <= max");
            // Longest path with both angles inside the FoV: the isosceles apex.
            const double longest = 1.0 / std::cos(deg2rad(scene.fov_deg));
            if (scene.path_factor_min >= longest)
                throw std::domain_error("config: no reflector placement with path factor >= " +
                                        std::to_string(scene.path_factor_min) + " fits inside +/-" +
                                        std::to_string(scene.fov_deg) + " deg of both nodes");
            if (!(scene.gamma_mag >= 0.0)) throw std::domain_error("config: scene.gamma_mag must be >= 0");
            if (!(scene.wavelength_m > 0.0)) throw std::domain_error("config: scene.wavelength_m must be > 0");
            if (scene.num_reflectors > 1 &&
                scene.min_reflector_separation_deg * static_cast<double>(scene.num_reflectors - 1) >=
                    2.0 * scene.fov_deg)
                throw std::domain_error("config: reflector separation cannot be met inside the FoV");
        } else if (scene.mode == SceneSpec::Mode::Paths) {
            scene.paths.validate();
        }
    }
};

struct TrialRecord {
    std::size_t trial = 0;
    std::vector<double> true_angles;
    std::vector<double> est_angles;
    double abs_error_deg = 0.0;
    double ber = 0.0;
    double ber_full = std::numeric_limits<double>::quiet_NaN();
    double rx_power = 0.0; // mean_m |g[m]|^2, noiseless
    bool warning = false;  // fewer peaks than requested
};

struct Aggregates {
    double mean_error = 0.0;
    double std_error = 0.0;
    double p90_error = 0.0;
    double mean_ber = 0.0;
    double mean_ber_full = std::numeric_limits<double>::quiet_NaN();
    double mean_rx_power = 0.0;
    std::size_t warnings = 0;
    std::size_t count = 0;

    /// Standard error of the mean error.
    double se_error() const { return count > 0 ? std_error / std::sqrt(static_cast<double>(count)) : 0.0; }
};

/// Linear-interpolation quantile (the numpy default).
inline double quantile(std::vector<double> x, double q)
{
    if (x.empty()) throw std::domain_error("quantile: empty sample");
    std::sort(x.begin(), x.end());
    const double h = (static_cast<double>(x.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, x.size() - 1);
    return x[lo] + (h - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

inline Aggregates compute_aggregates(const std::vector<TrialRecord>& records)
{
    Aggregates a;
    a.count = records.size();
    if (records.empty()) return a;
    const double n = static_cast<double>(records.size());
    std::vector<double> err;
    double ber = 0.0, power = 0.0, ber_full = 0.0;
    std::size_t n_full = 0;
    for (const auto& r : records) {
        err.push_back(r.abs_error_deg);
        ber += r.ber;
        power += r.rx_power;
        if (!std::isnan(r.ber_full)) {
            ber_full += r.ber_full;
            ++n_full;
        }
        a.warnings += r.warning;
    }
    double sum = 0.0;
    for (double e : err) sum += e;
    a.mean_error = sum / n;
    double ss = 0.0;
    for (double e : err) ss += (e - a.mean_error) * (e - a.mean_error);
    a.std_error = records.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    a.p90_error = quantile(err, 0.9);
    a.mean_ber = ber / n;
    a.mean_rx_power = power / n;
    if (n_full > 0) a.mean_ber_full = ber_full / static_cast<double>(n_full);
    return a;
}

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<TrialRecord> records;
    Aggregates aggregates;
    double elapsed_s = 0.0;
};

// ---------------------------------------------------------------------------
// Per-trial pieces

/// Random reflector scene: RX at the origin facing +x, TX at (d, 0) facing -x.
/// Each reflector's AoA is uniform over the FoV and its path length uniform over
/// the configured range; draws whose AoD leaves the FoV are rejected.
inline Scene draw_scene(const SceneSpec& spec, Rng& rng)
{
    const double d = spec.los_distance_m;
    Scene s;
    s.rx_pos = {0.0, 0.0};
    s.tx_pos = {d, 0.0};
    s.rx_boresight_deg = 0.0;
    s.tx_boresight_deg = 180.0;
    s.wavelength_m = spec.wavelength_m;

    std::uniform_real_distribution<double> aoa_dist(-spec.fov_deg, spec.fov_deg);
    std::uniform_real_distribution<double> len_dist(spec.path_factor_min * d, spec.path_factor_max * d);
    std::uniform_real_distribution<double> phase_dist(0.0, 2.0 * kPi);
    constexpr int kMaxAttempts = 1000000;

    std::vector<double> placed;
    for (std::size_t k = 0; k < spec.num_reflectors; ++k) {
        bool ok = false;
        for (int attempt = 0; attempt < kMaxAttempts && !ok; ++attempt) {
            const double aoa = aoa_dist(rng);
            const double len = len_dist(rng);
            const double th = deg2rad(aoa);
            // Reflector at range r along the AoA ray with r + |P - TX| = len.
            const double r = (len * len - d * d) / (2.0 * (len - d * std::cos(th)));
            const Vec2 pos{r * std::cos(th), r * std::sin(th)};
            const double aod = angle_from_boresight(s.tx_pos, s.tx_boresight_deg, pos);
            if (std::abs(aod) > spec.fov_deg) continue;
            bool separated = true;
            for (double other : placed)
                separated = separated && std::abs(aoa - other) >= spec.min_reflector_separation_deg;
            if (!separated) continue;
            placed.push_back(aoa);
            s.reflectors.push_back(Reflector{pos, std::polar(spec.gamma_mag, phase_dist(rng))});
            ok = true;
        }
        if (!ok) throw std::domain_error("draw_scene: could not place reflector " + std::to_string(k));
    }
    return s;
}

inline Channel trial_channel(const SceneSpec& spec, Rng& rng)
{
    switch (spec.mode) {
    case SceneSpec::Mode::Random: {
        Scene s = draw_scene(spec, rng);
        if (spec.mirror) s = mirror_roles(s);
        return scene_to_channel(s);
    }
    case SceneSpec::Mode::Pinned: return scene_to_channel(spec.mirror ? mirror_roles(spec.layout) : spec.layout);
    case SceneSpec::Mode::Paths: return spec.mirror ? mirror_roles(spec.paths) : spec.paths;
    }
    throw std::domain_error("unknown scene mode");
}

inline double noise_sigma_for(const NoiseSpec& spec, const Channel& ch, const LinkGeometry& link)
{
    if (spec.mode == NoiseSpec::Mode::Sigma) return spec.sigma;
    double ref = std::abs(ch.los.amp);
    if (spec.reference == NoiseSpec::Reference::Link)
        ref *= static_cast<double>(link.tx.num_elements * link.rx.num_elements);
    return ref / std::pow(10.0, spec.snr_db / 20.0);
}

/// Reflection of an angle about the mainlobe in sine space, where amplitude
/// templates are symmetric. NaN when the image falls off the visible region.
inline double mirror_angle_deg(double angle_deg, double center_deg)
{
    const double s = 2.0 * std::sin(deg2rad(center_deg)) - std::sin(deg2rad(angle_deg));
    if (std::abs(s) > 1.0) return std::numeric_limits<double>::quiet_NaN();
    return std::asin(s) * 180.0 / kPi;
}

/// Mean absolute error under the best one-to-one assignment of estimates to
/// truths; truths left without an estimate cost `penalty_deg`. With
/// fold_mirror an estimate may instead be scored by its mirror image.
inline double matched_error(const std::vector<double>& truth, const std::vector<double>& est, double penalty_deg,
                            bool fold_mirror = false, double mirror_center_deg = 0.0)
{
    if (truth.empty()) return 0.0;
    if (truth.size() > 8) throw std::domain_error("matched_error: at most 8 truths supported");
    auto cost = [&](double t, double e) {
        double c = std::abs(e - t);
        if (fold_mirror) {
            const double m = mirror_angle_deg(e, mirror_center_deg);
            if (!std::isnan(m)) c = std::min(c, std::abs(m - t));
        }
        return c;
    };
    // Slots: every estimate plus enough "missing" slots to cover all truths.
    std::vector<int> slot(std::max(truth.size(), est.size()));
    for (std::size_t i = 0; i < slot.size(); ++i) slot[i] = static_cast<int>(i);
    double best = std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (std::size_t t = 0; t < truth.size(); ++t) {
            const auto e = static_cast<std::size_t>(slot[t]);
            total += e < est.size() ? cost(truth[t], est[e]) : penalty_deg;
        }
        best = std::min(best, total);
    } while (std::next_permutation(slot.begin(), slot.end()));
    return best / static_cast<double>(truth.size());
}

struct TrialSetup {
    Channel channel;
    JcsConfig jcs;
};

/// Scene, codebook and pipeline settings for trial t of a point.
inline TrialSetup prepare_trial(const ExperimentConfig& cfg, std::uint64_t point_seed, std::size_t t)
{
    const std::uint64_t trial_seed = derive_seed(point_seed, "trial", t);
    Rng scene_rng(derive_seed(trial_seed, "scene"));
    TrialSetup setup;
    setup.channel = trial_channel(cfg.scene, scene_rng);
    const Channel& ch = setup.channel;

    JcsConfig& jc = setup.jcs;
    jc.channel = ch;
    jc.link.tx = ArrayGeometry(cfg.n_tx, cfg.spacing_wl);
    jc.link.rx = ArrayGeometry(cfg.n_rx, cfg.spacing_wl);
    jc.side = cfg.side;
    const double los = codebook_side_los_deg(ch, cfg.side);
    jc.codebook =
        sample_codebook(codebook_array(jc.link, cfg.side), los, cfg.L, cfg.M, derive_seed(trial_seed, "codebook"));
    jc.scheme = cfg.scheme;
    jc.symbols_per_beam = cfg.N;
    jc.preamble_len = cfg.preamble_len;
    jc.genie_symbols = cfg.genie_symbols;
    jc.noise_sigma = noise_sigma_for(cfg.noise, ch, jc.link);
    jc.beam_phase_std_rad = cfg.beam_phase_std_rad;
    jc.variant = cfg.variant;
    jc.norm = cfg.norm;
    jc.grid = cfg.grid;
    jc.exclusion_deg = cfg.exclusion_deg;
    jc.min_separation_deg = cfg.min_separation_deg;
    jc.num_peaks = cfg.num_peaks > 0 ? cfg.num_peaks : std::max<std::size_t>(1, ch.num_nlos());
    jc.seed = derive_seed(trial_seed, "jcs");
    return setup;
}

inline TrialRecord run_trial(const ExperimentConfig& cfg, std::uint64_t point_seed, std::size_t t)
{
    const TrialSetup setup = prepare_trial(cfg, point_seed, t);
    const Channel& ch = setup.channel;
    const JcsConfig& jc = setup.jcs;
    const double los = codebook_side_los_deg(ch, cfg.side);
    const ArrayGeometry& cb_geom = jc.codebook.geometry;

    const JcsResult res = run_jcs(jc);

    TrialRecord rec;
    rec.trial = t;
    rec.true_angles = codebook_side_nlos_deg(ch, cfg.side);
    rec.est_angles = res.estimate.angles_deg;
    rec.warning = res.estimate.fewer_than_requested;
    rec.ber = res.ber;
    const double penalty = 0.5 * (cfg.grid.max_deg - cfg.grid.min_deg);
    rec.abs_error_deg = matched_error(rec.true_angles, rec.est_angles, penalty, cfg.fold_mirror, los);

    const CVector g = beam_gains(ch, jc.link, fixed_side_weights(ch, jc.link, cfg.side), jc.codebook, cfg.side);
    double p = 0.0;
    for (const cd& v : g) p += std::norm(v);
    rec.rx_power = p / static_cast<double>(g.size());

    if (cfg.compare_full_array) {
        JcsConfig full = jc;
        full.codebook = full_array_codebook(cb_geom, los, cfg.M);
        rec.ber_full = run_jcs(full).ber;
    }
    return rec;
}

inline std::size_t resolve_threads(std::size_t requested, std::size_t jobs)
{
    std::size_t t = requested > 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    return std::max<std::size_t>(1, std::min(t, jobs));
}

/// Runs cfg.trials independent trials, seeded from cfg.seed.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg)
{
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();

    ExperimentResult out;
    out.config = cfg;
    out.records.resize(cfg.trials);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto worker = [&] {
        for (;;) {
            const std::size_t t = next.fetch_add(1);
            if (t >= cfg.trials) return;
            try {
                out.records[t] = run_trial(cfg, cfg.seed, t);
            } catch (...) {
                std::lock_guard lock(failure_mu);
                if (!failure) failure = std::current_exception();
                next = cfg.trials;
                return;
            }
        }
    };
    const std::size_t nt = resolve_threads(cfg.threads, cfg.trials);
    if (nt == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < nt; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    out.aggregates = compute_aggregates(out.records);
    out.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

// ---------------------------------------------------------------------------
// Sweeps

struct SweepResult {
    std::string kind;
    std::string param;
    std::vector<double> values;
    std::vector<ExperimentResult> points;
};

inline std::uint64_t point_seed(std::uint64_t master, std::string_view kind, double value)
{
    return derive_seed(master, kind, std::bit_cast<std::uint64_t>(value));
}

template <typename Apply>
SweepResult sweep(const ExperimentConfig& base, std::string kind, std::string param, const std::vector<double>& values,
                  Apply apply)
{
    if (values.empty()) throw std::domain_error("sweep " + kind + ": empty " + param);
    SweepResult out;
    out.kind = kind;
    out.param = param;
    out.values = values;
    for (double v : values) {
        ExperimentConfig c = base;
        apply(c, v);
        c.seed = point_seed(base.seed, kind, v);
        c.validate();
    }
    for (double v : values) {
        ExperimentConfig c = base;
        apply(c, v);
        c.seed = point_seed(base.seed, kind, v);
        out.points.push_back(run_experiment(c));
    }
    return out;
}

namespace detail {

template <typename T>
std::vector<double> as_doubles(const std::vector<T>& v)
{
    return std::vector<double>(v.begin(), v.end());
}

inline std::size_t as_count(double v) { return static_cast<std::size_t>(std::llround(v)); }

} // namespace detail

inline SweepResult sweep_beams(const ExperimentConfig& cfg, const std::vector<std::size_t>& M_list)
{
    return sweep(cfg, "beams", "M", detail::as_doubles(M_list),
                 [](ExperimentConfig& c, double v) { c.M = detail::as_count(v); });
}

inline SweepResult sweep_symbols(const ExperimentConfig& cfg, const std::vector<std::size_t>& N_list)
{
    return sweep(cfg, "symbols", "N", detail::as_doubles(N_list),
                 [](ExperimentConfig& c, double v) { c.N = detail::as_count(v); });
}

inline SweepResult sweep_off_antennas(const ExperimentConfig& cfg, const std::vector<std::size_t>& off_list)
{
    const std::size_t n = cfg.codebook_elements();
    for (std::size_t off : off_list)
        if (off >= n) throw std::domain_error("sweep_off_antennas: off count " + std::to_string(off) + " >= N");
    return sweep(cfg, "off_antennas", "off", detail::as_doubles(off_list),
                 [n](ExperimentConfig& c, double v) { c.L = n - detail::as_count(v); });
}

inline SweepResult sweep_snr(const ExperimentConfig& cfg, const std::vector<double>& snr_list_db)
{
    return sweep(cfg, "snr", "snr_db", snr_list_db, [](ExperimentConfig& c, double v) {
        c.noise.mode = NoiseSpec::Mode::Snr;
        c.noise.snr_db = v;
        c.compare_full_array = true;
    });
}

/// Larger n_tx is a narrower all-ON TX beam; rx_power in each point's
/// aggregates is the mean noiseless received power.
inline SweepResult sweep_tx_beamwidth(const ExperimentConfig& cfg, const std::vector<std::size_t>& n_tx_list)
{
    if (cfg.side != CodebookSide::Rx) throw std::domain_error("sweep_tx_beamwidth: needs the RX-side codebook");
    return sweep(cfg, "tx_beamwidth", "n_tx", detail::as_doubles(n_tx_list),
                 [](ExperimentConfig& c, double v) { c.n_tx = detail::as_count(v); });
}

struct ArraySizeRow {
    std::size_t size = 0;
    std::vector<std::size_t> off_tested;
    std::vector<ExperimentResult> results;
    std::size_t min_off = 0; // 0: target not reached
};

/// For each array size, increases the OFF count from 1 (or over cfg.off_list)
/// until the mean error reaches the target, up to half the array.
inline std::vector<ArraySizeRow> sweep_array_size(const ExperimentConfig& cfg, const std::vector<std::size_t>& sizes)
{
    if (sizes.empty()) throw std::domain_error("sweep_array_size: empty size list");
    std::vector<ArraySizeRow> rows;
    for (std::size_t n : sizes) {
        if (n < 2) throw std::domain_error("sweep_array_size: array size must be >= 2");
        ArraySizeRow row;
        row.size = n;
        std::vector<std::size_t> offs = cfg.off_list;
        if (offs.empty())
            for (std::size_t o = 1; o <= n / 2; ++o) offs.push_back(o);
        for (std::size_t off : offs) {
            if (off >= n) continue;
            ExperimentConfig c = cfg;
            (c.side == CodebookSide::Rx ? c.n_rx : c.n_tx) = n;
            c.L = n - off;
            c.seed = derive_seed(point_seed(cfg.seed, "array_size", static_cast<double>(n)), "off", off);
            row.off_tested.push_back(off);
            row.results.push_back(run_experiment(c));
            if (row.results.back().aggregates.mean_error <= cfg.target_error_deg) {
                row.min_off = off;
                break;
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

struct SidePair {
    ExperimentResult rx;
    ExperimentResult tx;
};

/// Runs the RX-side codebook and the TX-side codebook with matched seeds.
/// Mirrored: the TX-side run swaps the node roles, so the codebook array is the
/// same physical array and every scene is the mirror image of the RX-side one.
/// Otherwise the TX-side run uses the same arrays and scenes.
inline SidePair sweep_side(const ExperimentConfig& cfg, bool mirrored = true)
{
    ExperimentConfig rx = cfg;
    rx.side = CodebookSide::Rx;
    rx.seed = derive_seed(cfg.seed, "side");
    ExperimentConfig tx = rx;
    tx.side = CodebookSide::Tx;
    if (mirrored) {
        std::swap(tx.n_tx, tx.n_rx);
        tx.scene.mirror = !tx.scene.mirror;
    }
    rx.validate();
    tx.validate();
    return SidePair{run_experiment(rx), run_experiment(tx)};
}

struct Rates {
    double beam_switch_rate_hz = 0.0;
    double sensing_rate_hz = 0.0;
};

inline Rates rate_calculator(double symbol_rate_hz, double N, double M)
{
    if (!(symbol_rate_hz > 0.0) || !(N > 0.0) || !(M > 0.0))
        throw std::domain_error("rate_calculator: all inputs must be > 0");
    return Rates{symbol_rate_hz / N, symbol_rate_hz / (N * M)};
}

// ---------------------------------------------------------------------------
// Trend checks

struct TrendCheck {
    bool ok = true;
    std::vector<std::size_t> violations; // index j where mean[j] rose significantly above mean[j-1]
};

/// Consecutive means may rise by at most k combined standard errors.
inline TrendCheck check_non_increasing(const std::vector<double>& means, const std::vector<double>& ses, double k = 2.0)
{
    if (means.size() != ses.size()) throw std::domain_error("check_non_increasing: size mismatch");
    TrendCheck tc;
    for (std::size_t j = 1; j < means.size(); ++j) {
        const double tol = k * std::sqrt(ses[j - 1] * ses[j - 1] + ses[j] * ses[j]);
        if (means[j] > means[j - 1] + tol) {
            tc.ok = false;
            tc.violations.push_back(j);
        }
    }
    return tc;
}

inline TrendCheck check_non_increasing(const SweepResult& s, double k = 2.0)
{
    std::vector<double> m, se;
    for (const auto& p : s.points) {
        m.push_back(p.aggregates.mean_error);
        se.push_back(p.aggregates.se_error());
    }
    return check_non_increasing(m, se, k);
}

} // namespace csjcs
