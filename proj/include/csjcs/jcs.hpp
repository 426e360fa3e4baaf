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

// One packet through the whole pipeline: preamble equalization under the
// full-array beams, data detection with the scaled boundary while the
// codebook cycles, then sensing from the same data frame.

#pragma once

#include <cstdint>

#include "csjcs/sensing.hpp"
#include "csjcs/waveform.hpp"

namespace csjcs {

struct JcsConfig {
    Channel channel;
    LinkGeometry link;
    CodebookSide side = CodebookSide::Rx;
    SidelobeCodebook codebook; // on the `side` array, mainlobe toward the LOS
    Modulation scheme = Modulation::QAM4;
    std::size_t symbols_per_beam = 100;
    std::size_t preamble_len = 16;
    bool genie_symbols = false;
    double noise_sigma = 0.0;
    double beam_phase_std_rad = 0.0;
    EstimatorVariant variant = EstimatorVariant::NonCoherent;
    SpectrumNorm norm = SpectrumNorm::Centered;
    AngleGrid grid;
    double exclusion_deg = 3.3;
    double min_separation_deg = 5.0;
    std::size_t num_peaks = 1;
    std::uint64_t seed = 0;
};

struct JcsResult {
    double ber = 0.0;
    std::size_t bit_errors = 0;
    std::size_t num_bits = 0;
    cd g_hat{0.0, 0.0};
    double los_deg = 0.0; // LOS angle at the codebook side
    FrameCapture capture;
    Fingerprint fingerprint;
    AngleSpectrum spectrum;
    AoaEstimate estimate;
};

/// LOS angle as seen by the array carrying the codebook.
inline double codebook_side_los_deg(const Channel& ch, CodebookSide side)
{
    return side == CodebookSide::Rx ? ch.los.aoa_deg : ch.los.aod_deg;
}

/// Reflector angles as seen by the array carrying the codebook.
inline std::vector<double> codebook_side_nlos_deg(const Channel& ch, CodebookSide side)
{
    std::vector<double> out;
    for (const auto& p : ch.nlos) out.push_back(side == CodebookSide::Rx ? p.aoa_deg : p.aod_deg);
    return out;
}

inline const ArrayGeometry& codebook_array(const LinkGeometry& link, CodebookSide side)
{
    return side == CodebookSide::Rx ? link.rx : link.tx;
}

inline const ArrayGeometry& fixed_array(const LinkGeometry& link, CodebookSide side)
{
    return side == CodebookSide::Rx ? link.tx : link.rx;
}

/// Full-array beam on the fixed side, steered at the LOS.
inline CVector fixed_side_weights(const Channel& ch, const LinkGeometry& link, CodebookSide side)
{
    const double a = side == CodebookSide::Rx ? ch.los.aod_deg : ch.los.aoa_deg;
    return full_array_weights(fixed_array(link, side), a);
}

/// Noiseless |g|^2 under the full-array beams at both ends: the directional
/// link's received power for a unit-energy symbol.
inline double full_array_power(const Channel& ch, const LinkGeometry& link)
{
    return std::norm(effective_gain(ch, link, full_array_weights(link.tx, ch.los.aod_deg),
                                    full_array_weights(link.rx, ch.los.aoa_deg)));
}

inline JcsResult run_jcs(const JcsConfig& cfg)
{
    cfg.channel.validate();
    cfg.link.tx.validate();
    cfg.link.rx.validate();
    cfg.codebook.validate();
    if (cfg.codebook.geometry.num_elements != codebook_array(cfg.link, cfg.side).num_elements)
        throw std::domain_error("run_jcs: codebook size does not match the codebook-side array");
    if (cfg.symbols_per_beam == 0) throw std::domain_error("run_jcs: symbols_per_beam must be >= 1");
    if (cfg.preamble_len == 0 && !cfg.genie_symbols)
        throw std::domain_error("run_jcs: preamble_len must be >= 1 unless genie symbols are used");
    if (cfg.num_peaks == 0) throw std::domain_error("run_jcs: num_peaks must be >= 1");

    const ModulationScheme scheme = make_scheme(cfg.scheme);
    const std::size_t N = cfg.symbols_per_beam;
    const std::size_t M = cfg.codebook.num_beams();
    const std::size_t L = cfg.codebook.subset_size();
    const std::size_t n_cb = cfg.codebook.geometry.num_elements;

    // Payload, laid out beam by beam.
    Rng bit_rng(derive_seed(cfg.seed, "payload"));
    const Bits tx_bits = random_bits(N * M * scheme.bits_per_symbol, bit_rng);
    const CVector tx_syms = modulate(tx_bits, scheme);
    CMatrix symbols(N, M);
    for (std::size_t m = 0; m < M; ++m)
        for (std::size_t n = 0; n < N; ++n) symbols(n, m) = tx_syms[m * N + n];

    JcsResult res;
    res.los_deg = codebook_side_los_deg(cfg.channel, cfg.side);
    const CVector w_fixed = fixed_side_weights(cfg.channel, cfg.link, cfg.side);

    // Preamble under the full array on both ends.
    if (cfg.preamble_len > 0) {
        Rng pre_rng(derive_seed(cfg.seed, "preamble"));
        const CVector pre = make_preamble(cfg.preamble_len, pre_rng);
        const cd g_full = effective_gain(cfg.channel, cfg.link, full_array_weights(cfg.link.tx, cfg.channel.los.aod_deg),
                                         full_array_weights(cfg.link.rx, cfg.channel.los.aoa_deg));
        Rng pre_noise(derive_seed(cfg.seed, "preamble_noise"));
        CVector rx_pre(pre.size());
        for (std::size_t i = 0; i < pre.size(); ++i) {
            rx_pre[i] = g_full * pre[i];
            if (cfg.noise_sigma > 0.0) rx_pre[i] += complex_gaussian(pre_noise, cfg.noise_sigma);
        }
        res.g_hat = estimate_equalizer(rx_pre, pre);
    }

    FrameCapture cap = transmit_frame(cfg.channel, cfg.link, w_fixed, cfg.codebook, cfg.side, symbols,
                                      FrameNoise{cfg.noise_sigma, derive_seed(cfg.seed, "frame_noise"),
                                                 cfg.beam_phase_std_rad});

    if (cfg.preamble_len > 0 && std::abs(res.g_hat) > 0.0) {
        CVector rx(N * M);
        for (std::size_t m = 0; m < M; ++m)
            for (std::size_t n = 0; n < N; ++n) rx[m * N + n] = cap.samples(n, m);
        const double scale = static_cast<double>(L) / static_cast<double>(n_cb);
        const Demodulated dem = demodulate(rx, res.g_hat, scheme, scale);
        res.num_bits = tx_bits.size();
        res.bit_errors = bit_errors(tx_bits, dem.bits);
        res.ber = static_cast<double>(res.bit_errors) / static_cast<double>(res.num_bits);
        if (!cfg.genie_symbols)
            for (std::size_t m = 0; m < M; ++m)
                for (std::size_t n = 0; n < N; ++n) cap.symbols_used(n, m) = dem.symbols[m * N + n];
    } else if (!cfg.genie_symbols) {
        throw std::domain_error("run_jcs: equalizer estimate is zero; cannot detect symbols");
    } else {
        res.num_bits = 0;
        res.ber = 0.0;
    }

    res.fingerprint = compute_fingerprint(cap, cfg.variant);
    res.spectrum = angle_spectrum(res.fingerprint, cfg.codebook, cfg.grid, cfg.side,
                                  SpectrumOptions{cfg.norm, res.los_deg, cfg.exclusion_deg});
    res.estimate = estimate_aoa(res.spectrum, cfg.num_peaks, cfg.min_separation_deg);
    res.capture = std::move(cap);
    return res;
}

} // namespace csjcs
