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

// Acceptance checks for the simulator. Each criterion prints one PASS/FAIL
// line; indented lines below it are supplementary measurements.

#include <CLI11.hpp>

#include <cstdio>
#include <functional>
#include <map>
#include <numeric>

#include "csjcs/csjcs.hpp"

using namespace csjcs;

namespace {

// Pinned tolerances.
constexpr double kLossTolDb = 1e-4;
constexpr double kMainlobeTol = 1e-9;
constexpr double kMarginTargetDb = 9.6;
constexpr double kMarginTolDb = 0.5;
constexpr double kTargetErrorDeg = 2.0;
constexpr double kPlateauDeg = 0.5;
constexpr double kSnrTolDb = 0.2;
constexpr double kSigmas = 2.0;
constexpr double kRecoveryDeg = 2.0;
constexpr double kRecoveryFraction = 0.9;

// Noise for the sensing studies. Element-referenced so that the noise floor
// does not change with array size: 6 dB per element is about 30 dB at the
// output of a 16-element full-array link.
constexpr double kHighSnrElementDb = 6.0;
// "Under noise" for the symbol-count trend: about 10 dB at the 16-element output.
constexpr double kModerateSnrElementDb = -14.0;

bool report(int n, bool ok, const std::string& what)
{
    std::printf("criterion %d: %s  %s\n", n, ok ? "PASS" : "FAIL", what.c_str());
    return ok;
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

/// The single-reflector study: 16-element RX, 12 ON, 189 beams, 0.25 deg grid.
ExperimentConfig sensing_study(std::uint64_t seed)
{
    ExperimentConfig c;
    c.n_tx = 1;
    c.n_rx = 16;
    c.L = 12;
    c.M = 189;
    c.N = 100;
    c.trials = 200;
    c.seed = seed;
    c.grid = AngleGrid{-90.0, 90.0, 0.25};
    c.noise.mode = NoiseSpec::Mode::Snr;
    c.noise.reference = NoiseSpec::Reference::Element;
    c.noise.snr_db = kHighSnrElementDb;
    c.variant = EstimatorVariant::Coherent;
    return c;
}

void print_aggregates(const char* label, const Aggregates& a)
{
    std::printf("  %-28s mean %.3f deg  std %.3f  p90 %.3f  se %.3f  warnings %zu  n %zu\n", label, a.mean_error,
                a.std_error, a.p90_error, a.se_error(), a.warnings, a.count);
}

// ---------------------------------------------------------------------------

bool criterion1()
{
    const BigCount c16_4 = randomness_space_size(16, 4);
    const BigCount c64_2 = randomness_space_size(64, 2);
    const double loss = directivity_loss_db(64, 2);
    const Rates r = rate_calculator(1e9, 750, 100);
    char beam[32], sense[32];
    std::snprintf(beam, sizeof beam, "%.3g", r.beam_switch_rate_hz);
    std::snprintf(sense, sizeof sense, "%.3g", r.sensing_rate_hz);
    const bool ok = c16_4 == 1820 && c64_2 == 2016 && std::abs(loss - (-0.2758)) <= kLossTolDb &&
                    std::string(beam) == "1.33e+06" && std::string(sense) == "1.33e+04";
    std::printf("  C(16,4) = %llu  C(64,2) = %llu  loss = %.6f dB  rates = %s Hz, %s Hz\n",
                static_cast<unsigned long long>(c16_4), static_cast<unsigned long long>(c64_2), loss, beam, sense);
    return report(1, ok, "exact analytics");
}

bool criterion2()
{
    Rng rng(20260101);
    std::uniform_int_distribution<std::size_t> n_dist(2, 32);
    std::uniform_real_distribution<double> ang(-80.0, 80.0), spacing(0.3, 0.7), pe(-kPi, kPi);
    double worst_main = 0.0, worst_closed = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const std::size_t n = n_dist(rng);
        std::vector<double> errs(n);
        for (double& e : errs) e = pe(rng);
        const ArrayGeometry g(n, spacing(rng), errs);
        const std::size_t L = std::uniform_int_distribution<std::size_t>(1, n)(rng);
        const double th0 = ang(rng);
        const SidelobeCodebook cb = sample_codebook(g, th0, L, 4, rng());
        for (std::size_t m = 0; m < cb.num_beams(); ++m) {
            worst_main = std::max(worst_main, std::abs(array_factor(cb, m, th0) - cd(static_cast<double>(L), 0.0)));
            for (int k = 0; k < 5; ++k) {
                const double th = ang(rng);
                const cd closed = array_factor(cb, m, th);
                const cd ip = inner(make_weight_vector(cb, m), steering_vector(g, th));
                worst_closed = std::max(worst_closed, std::abs(closed - ip));
            }
        }
    }
    std::printf("  max |R(m, theta0) - L| = %.3e  max |closed form - inner product| = %.3e\n", worst_main,
                worst_closed);
    return report(2, worst_main <= kMainlobeTol && worst_closed <= kMainlobeTol, "mainlobe constancy");
}

bool criterion3()
{
    const MarginReport rep = margin_report(ArrayGeometry(16), 12, 0.0);
    std::printf("  region: outside the full-array null-to-null main beam, 0.1 deg scan\n");
    std::printf("  subsets %llu (%s)  min margin %.3f dB  mean margin %.3f dB  worst at %.2f deg\n",
                static_cast<unsigned long long>(rep.subsets_evaluated), rep.exhaustive ? "exhaustive" : "sampled",
                rep.min_margin_db, rep.mean_margin_db, rep.worst_angle_deg);
    for (double hw : {15.0, 20.0, 30.0}) {
        MarginOptions o;
        o.region.kind = SidelobeRegion::Kind::OutsideWindow;
        o.region.half_width_deg = hw;
        const MarginReport w = margin_report(ArrayGeometry(16), 12, 0.0, o);
        std::printf("  outside +/-%.0f deg: min margin %.3f dB  mean margin %.3f dB\n", hw, w.min_margin_db,
                    w.mean_margin_db);
    }
    const bool ok = rep.exhaustive && rep.subsets_evaluated == 1820 &&
                    std::abs(rep.min_margin_db - kMarginTargetDb) <= kMarginTolDb;
    return report(3, ok, fmt("minimum margin %.3f dB vs %.1f +/- %.1f dB", rep.min_margin_db, kMarginTargetDb,
                             kMarginTolDb));
}

bool criterion4()
{
    const ExperimentConfig c = sensing_study(4);
    const ExperimentResult r = run_experiment(c);
    print_aggregates("coherent", r.aggregates);
    // Amplitude-only estimator for reference, raw and scored up to the
    // mirror image about the LOS.
    ExperimentConfig nc = c;
    nc.variant = EstimatorVariant::NonCoherent;
    print_aggregates("non-coherent", run_experiment(nc).aggregates);
    nc.fold_mirror = true;
    print_aggregates("non-coherent, mirror folded", run_experiment(nc).aggregates);
    return report(4, r.aggregates.mean_error <= kTargetErrorDeg,
                  fmt("mean AoA error %.3f deg vs <= %.1f deg", r.aggregates.mean_error, kTargetErrorDeg));
}

void print_rows(const std::vector<ArraySizeRow>& rows)
{
    for (const auto& row : rows) {
        std::printf("  n=%-3zu", row.size);
        for (std::size_t i = 0; i < row.off_tested.size(); ++i)
            std::printf(" off %zu: %.3f", row.off_tested[i], row.results[i].aggregates.mean_error);
        std::printf("  -> min OFF %s\n", row.min_off ? std::to_string(row.min_off).c_str() : "not reached");
    }
}

bool criterion5()
{
    ExperimentConfig c = sensing_study(5);
    c.target_error_deg = kTargetErrorDeg;
    const auto rows = sweep_array_size(c, {8, 12, 64});
    print_rows(rows);
    std::map<std::size_t, std::size_t> min_off;
    for (const auto& r : rows) min_off[r.size] = r.min_off;
    const bool ok64 = min_off[64] >= 1 && min_off[64] <= 2;
    const bool ok12 = min_off[12] == 4;
    const bool ok8 = min_off[8] == 0;
    std::printf("  64 needs <= 2 OFF: %s; 12 needs 4 OFF: %s; 8 fails at half OFF: %s\n", ok64 ? "yes" : "no",
                ok12 ? "yes" : "no", ok8 ? "yes" : "no");

    ExperimentConfig nc = c;
    nc.variant = EstimatorVariant::NonCoherent;
    nc.fold_mirror = true;
    nc.trials = 100;
    std::printf("  non-coherent, mirror folded, 100 trials:\n");
    print_rows(sweep_array_size(nc, {8, 12, 64}));
    return report(5, ok64 && ok12 && ok8, "array-size scaling of the OFF count needed for 2 deg");
}

bool trend_line(const char* label, const SweepResult& s)
{
    const TrendCheck tc = check_non_increasing(s, kSigmas);
    std::printf("  %-8s", label);
    for (std::size_t i = 0; i < s.points.size(); ++i)
        std::printf(" %g: %.3f+/-%.3f", s.values[i], s.points[i].aggregates.mean_error,
                    s.points[i].aggregates.se_error());
    std::printf("  %s\n", tc.ok ? "non-increasing" : "rises");
    return tc.ok;
}

bool criterion6()
{
    ExperimentConfig c = sensing_study(6);
    c.trials = 100;

    const SweepResult beams = sweep_beams(c, {10, 25, 50, 100, 189});
    const bool beams_ok = trend_line("M", beams);
    const double plateau = std::abs(beams.points[3].aggregates.mean_error - beams.points[4].aggregates.mean_error);
    std::printf("  |error(M=100) - error(M=189)| = %.3f deg\n", plateau);

    ExperimentConfig noisy = c;
    noisy.noise.snr_db = kModerateSnrElementDb;
    const SweepResult symbols = sweep_symbols(noisy, {25, 100, 400, 700, 1000});
    const bool symbols_ok = trend_line("N", symbols);

    const SweepResult off = sweep_off_antennas(c, {1, 2, 3, 4});
    const bool off_ok = trend_line("OFF", off);

    return report(6, beams_ok && plateau < kPlateauDeg && symbols_ok && off_ok,
                  "error non-increasing in M (plateau < 0.5 deg), N under noise and OFF count");
}

bool criterion7()
{
    bool ok = true;
    struct Case {
        std::size_t n_tx, L;
        double amp, sigma;
    };
    for (const Case k : {Case{1, 12, 0.01, 0.05}, Case{4, 12, 0.05, 0.9}, Case{8, 4, 0.002, 0.01}}) {
        const LinkGeometry link{ArrayGeometry(k.n_tx), ArrayGeometry(16)};
        Channel ch;
        ch.los = {0.0, 0.0, std::polar(k.amp, 0.3)};
        const SidelobeCodebook cb = sample_codebook(link.rx, 0.0, k.L, 100, 7);
        Rng rng(11);
        const CVector syms = modulate(random_bits(2 * 1000 * 100, rng), Modulation::QAM4);
        CMatrix s(1000, 100);
        std::copy(syms.begin(), syms.end(), s.data().begin());
        const CVector wt = full_array_weights(link.tx, 0.0);
        const FrameCapture noisy = transmit_frame(ch, link, wt, cb, s, k.sigma, 99);
        const FrameCapture clean = transmit_frame(ch, link, wt, cb, s, 0.0, 99);
        double ps = 0.0, pn = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            ps += std::norm(clean.samples.data()[i]);
            pn += std::norm(noisy.samples.data()[i] - clean.samples.data()[i]);
        }
        const double measured = 10.0 * std::log10(ps / pn);
        const double nt = static_cast<double>(k.n_tx), L = static_cast<double>(k.L);
        const double formula = 10.0 * std::log10(k.amp * k.amp * nt * nt * L * L / (k.sigma * k.sigma));
        std::printf("  N_tx=%zu L=%zu: measured %.3f dB, formula %.3f dB, 1e5 samples\n", k.n_tx, k.L, measured,
                    formula);
        ok = ok && std::abs(measured - formula) <= kSnrTolDb;
    }
    return report(7, ok, "empirical SNR within 0.2 dB of the link budget");
}

bool criterion8()
{
    Rng rng(8);
    std::uniform_real_distribution<double> ph(-kPi, kPi);
    const AngleGrid grid{-90.0, 90.0, 0.25};
    SceneSpec spec;

    bool phase_ok = true, scale_ok = true, zero_ok = true;
    double worst_fp = 0.0;
    for (int t = 0; t < 100; ++t) {
        JcsConfig cfg;
        cfg.channel = scene_to_channel(draw_scene(spec, rng));
        cfg.codebook = sample_codebook(cfg.link.rx, 0.0, 12, 189, rng());
        cfg.genie_symbols = true;
        cfg.noise_sigma = 0.1 * std::abs(cfg.channel.los.amp);
        cfg.grid = grid;
        cfg.seed = rng();
        const JcsResult base = run_jcs(cfg);

        FrameCapture rot = base.capture;
        for (std::size_t m = 0; m < rot.samples.cols(); ++m) {
            const cd r = std::polar(1.0, ph(rng));
            for (std::size_t n = 0; n < rot.samples.rows(); ++n) rot.samples(n, m) *= r;
        }
        const Fingerprint fr = compute_fingerprint(rot, EstimatorVariant::NonCoherent);
        for (std::size_t m = 0; m < fr.values.size(); ++m)
            worst_fp = std::max(worst_fp, std::abs(fr.values[m] - base.fingerprint.values[m]) /
                                              std::abs(base.fingerprint.a_ml));
        const AoaEstimate er = estimate_aoa(angle_spectrum(fr, cfg.codebook, grid, CodebookSide::Rx,
                                                           {cfg.norm, base.los_deg, cfg.exclusion_deg}),
                                            1);
        phase_ok = phase_ok && er.angles_deg == base.estimate.angles_deg;

        // Quarter-turn rotations are exact in floating point.
        FrameCapture quarter = base.capture;
        for (std::size_t m = 0; m < quarter.samples.cols(); ++m)
            for (std::size_t n = 0; n < quarter.samples.rows(); ++n) {
                cd& y = quarter.samples(n, m);
                y = (m % 4 == 0) ? y : (m % 4 == 1) ? cd(-y.imag(), y.real()) : (m % 4 == 2) ? -y : cd(y.imag(), -y.real());
            }
        phase_ok = phase_ok && compute_fingerprint(quarter, EstimatorVariant::NonCoherent).values ==
                                   base.fingerprint.values;

        for (double c : {1e-3, 0.5, 3.0, 1e3}) {
            FrameCapture s = base.capture;
            for (cd& y : s.samples.data()) y *= c;
            const AoaEstimate es = estimate_aoa(angle_spectrum(compute_fingerprint(s, EstimatorVariant::NonCoherent),
                                                               cfg.codebook, grid, CodebookSide::Rx,
                                                               {cfg.norm, base.los_deg, cfg.exclusion_deg}),
                                                1);
            scale_ok = scale_ok && es.angles_deg == base.estimate.angles_deg;
        }

        JcsConfig los_only = cfg;
        los_only.channel.nlos.clear();
        los_only.noise_sigma = 0.0;
        const JcsResult z = run_jcs(los_only);
        for (const cd& f : z.fingerprint.values) zero_ok = zero_ok && std::abs(f) <= 1e-12 * std::abs(z.fingerprint.a_ml);
    }
    phase_ok = phase_ok && worst_fp <= 1e-12;

    ExperimentConfig c = sensing_study(8);
    c.variant = EstimatorVariant::NonCoherent;
    c.M = 60;
    c.N = 20;
    c.trials = 20;
    c.threads = 1;
    const ExperimentResult a = run_experiment(c);
    c.threads = 4;
    const ExperimentResult b = run_experiment(c);
    bool det_ok = true;
    for (std::size_t t = 0; t < c.trials; ++t)
        det_ok = det_ok && a.records[t].est_angles == b.records[t].est_angles &&
                 a.records[t].abs_error_deg == b.records[t].abs_error_deg && a.records[t].ber == b.records[t].ber;
    det_ok = det_ok && compute_aggregates(a.records).mean_error == b.aggregates.mean_error;

    std::printf("  per-beam phase: estimates identical %s, quarter turns bit-identical, max |dF|/A_ML = %.2e\n",
                phase_ok ? "yes" : "no", worst_fp);
    std::printf("  positive scaling argmax %s; K=0 fingerprint zero %s; determinism %s\n",
                scale_ok ? "kept" : "changed", zero_ok ? "yes" : "no", det_ok ? "yes" : "no");
    return report(8, phase_ok && scale_ok && zero_ok && det_ok, "invariance suite");
}

bool criterion9()
{
    bool noiseless_ok = true;
    for (Modulation m : {Modulation::PAM4, Modulation::QAM4, Modulation::QAM16}) {
        const std::size_t bps = make_scheme(m).bits_per_symbol;
        JcsConfig cfg;
        cfg.channel.los = {0.0, 0.0, std::polar(0.01, 0.7)};
        cfg.channel.nlos = {{30.0, -30.0, std::polar(0.003, 1.9)}};
        cfg.codebook = sample_codebook(cfg.link.rx, 0.0, 12, 189, 9);
        cfg.scheme = m;
        cfg.symbols_per_beam = (1000000 + 189 * bps - 1) / (189 * bps);
        cfg.grid = AngleGrid{-90.0, 90.0, 1.0};
        const JcsResult r = run_jcs(cfg);
        std::printf("  noiseless %-5s %zu bit errors in %zu bits\n", to_string(m), r.bit_errors, r.num_bits);
        noiseless_ok = noiseless_ok && r.bit_errors == 0 && r.num_bits >= 1000000;
    }

    ExperimentConfig c = sensing_study(9);
    c.trials = 100;
    c.noise.reference = NoiseSpec::Reference::Link;
    const SweepResult s = sweep_snr(c, {0.0, 3.0, 6.0});
    bool low_ok = true;
    const double bits = static_cast<double>(c.M * c.N * make_scheme(c.scheme).bits_per_symbol * c.trials);
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        const Aggregates& a = s.points[i].aggregates;
        const double se = std::sqrt(a.mean_ber * (1.0 - a.mean_ber) / bits +
                                    a.mean_ber_full * (1.0 - a.mean_ber_full) / bits);
        const bool ok = a.mean_ber_full <= a.mean_ber + kSigmas * se;
        std::printf("  link SNR %4.1f dB: full-array BER %.4g, compressive BER %.4g (%s)\n", s.values[i],
                    a.mean_ber_full, a.mean_ber, ok ? "ok" : "full array worse");
        low_ok = low_ok && ok;
    }
    return report(9, noiseless_ok && low_ok, "noiseless BER 0 on 1e6 bits; full array no worse at low SNR");
}

/// Largest per-reflector error under the best assignment, or infinity when
/// fewer estimates than reflectors came back.
double worst_matched(const std::vector<double>& truth, const std::vector<double>& est)
{
    if (est.size() < truth.size()) return std::numeric_limits<double>::infinity();
    std::vector<std::size_t> idx(est.size());
    std::iota(idx.begin(), idx.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double w = 0.0;
        for (std::size_t t = 0; t < truth.size(); ++t) w = std::max(w, std::abs(truth[t] - est[idx[t]]));
        best = std::min(best, w);
    } while (std::next_permutation(idx.begin(), idx.end()));
    return best;
}

bool criterion10()
{
    ExperimentConfig c = sensing_study(10);
    c.trials = 100;
    c.scene.num_reflectors = 2;
    c.scene.min_reflector_separation_deg = 10.0;
    c.num_peaks = 2;
    const ExperimentResult coh = run_experiment(c);
    ExperimentConfig nc_cfg = c;
    nc_cfg.variant = EstimatorVariant::NonCoherent;
    const ExperimentResult nc = run_experiment(nc_cfg);
    print_aggregates("coherent", coh.aggregates);
    print_aggregates("non-coherent", nc.aggregates);

    // Paired comparison: the two runs share scenes, codebooks and noise.
    std::vector<double> diff;
    std::size_t recovered = 0;
    for (std::size_t t = 0; t < c.trials; ++t) {
        diff.push_back(coh.records[t].abs_error_deg - nc.records[t].abs_error_deg);
        recovered += worst_matched(coh.records[t].true_angles, coh.records[t].est_angles) <= kRecoveryDeg;
    }
    const double mean_d = std::accumulate(diff.begin(), diff.end(), 0.0) / static_cast<double>(diff.size());
    double ss = 0.0;
    for (double d : diff) ss += (d - mean_d) * (d - mean_d);
    const double se_d = std::sqrt(ss / static_cast<double>(diff.size() - 1) / static_cast<double>(diff.size()));
    const bool better = mean_d <= kSigmas * se_d;
    const double frac = static_cast<double>(recovered) / static_cast<double>(c.trials);
    std::printf("  paired mean difference (coherent - non-coherent) %.3f +/- %.3f deg\n", mean_d, se_d);
    std::printf("  both reflectors within %.0f deg via top-2 peaks in %zu of %zu trials\n", kRecoveryDeg, recovered,
                c.trials);
    return report(10, better && frac >= kRecoveryFraction,
                  fmt("coherent no worse than non-coherent; two-reflector recovery %.2f vs >= %.2f", frac,
                      kRecoveryFraction));
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"acceptance checks"};
    std::vector<int> criteria;
    app.add_option("--criterion", criteria, "criterion number(s), 1-10; all when omitted")->check(CLI::Range(1, 10));
    CLI11_PARSE(app, argc, argv);
    if (criteria.empty())
        for (int i = 1; i <= 10; ++i) criteria.push_back(i);

    const std::map<int, std::function<bool()>> table{{1, criterion1}, {2, criterion2}, {3, criterion3},
                                                     {4, criterion4}, {5, criterion5}, {6, criterion6},
                                                     {7, criterion7}, {8, criterion8}, {9, criterion9},
                                                     {10, criterion10}};
    bool all = true;
    for (int n : criteria) {
        try {
            all = table.at(n)() && all;
        } catch (const std::exception& e) {
            report(n, false, std::string("exception: ") + e.what());
            all = false;
        }
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
