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

#pragma once

#include <cstdint>

#include "csjcs/channel.hpp"

namespace csjcs {

/// Received samples y[n, m] for N symbols under each of M beams, plus the
/// symbols the sensing stage divides by (detected or genie).
struct FrameCapture {
    CMatrix samples;      // N x M
    CMatrix symbols_used; // N x M
    SidelobeCodebook codebook;
    CodebookSide side = CodebookSide::Rx;

    std::size_t num_symbols() const { return samples.rows(); }
    std::size_t num_beams() const { return samples.cols(); }

    void validate() const
    {
        if (samples.rows() == 0 || samples.cols() == 0) throw std::domain_error("FrameCapture: empty sample matrix");
        if (samples.cols() != codebook.num_beams())
            throw std::domain_error("FrameCapture: sample columns do not match the codebook's M");
        if (symbols_used.rows() != samples.rows() || symbols_used.cols() != samples.cols())
            throw std::domain_error("FrameCapture: symbol matrix shape differs from the sample matrix");
        for (const cd& s : symbols_used.data())
            if (s == cd{0.0, 0.0}) throw std::domain_error("FrameCapture: zero symbol");
    }
};

struct FrameNoise {
    double sigma = 0.0;
    std::uint64_t seed = 0;
    /// Std-dev of a random global phase applied per beam; models residual
    /// synchronization error. Zero disables it.
    double beam_phase_std_rad = 0.0;
};

/// y[n, m] = g[m] s[n, m] + z[n, m] with g from beam_gains.
inline FrameCapture transmit_frame(const Channel& channel, const LinkGeometry& link, const CVector& fixed_weights,
                                   const SidelobeCodebook& codebook, CodebookSide side, const CMatrix& symbols,
                                   const FrameNoise& noise)
{
    if (symbols.cols() != codebook.num_beams())
        throw std::domain_error("transmit_frame: symbol matrix has " + std::to_string(symbols.cols()) +
                                " columns, codebook has " + std::to_string(codebook.num_beams()) + " beams");
    if (symbols.rows() == 0) throw std::domain_error("transmit_frame: need at least one symbol per beam");
    if (!(noise.sigma >= 0.0)) throw std::domain_error("transmit_frame: noise sigma must be >= 0");

    const CVector g = beam_gains(channel, link, fixed_weights, codebook, side);
    const std::size_t N = symbols.rows();
    const std::size_t M = symbols.cols();

    FrameCapture cap;
    cap.samples = CMatrix(N, M);
    cap.symbols_used = symbols;
    cap.codebook = codebook;
    cap.side = side;

    Rng rng(noise.seed);
    std::normal_distribution<double> phase_dist(0.0, 1.0);
    for (std::size_t m = 0; m < M; ++m) {
        cd gm = g[m];
        if (noise.beam_phase_std_rad > 0.0) gm *= std::polar(1.0, noise.beam_phase_std_rad * phase_dist(rng));
        for (std::size_t n = 0; n < N; ++n) {
            cd y = gm * symbols(n, m);
            if (noise.sigma > 0.0) y += complex_gaussian(rng, noise.sigma);
            cap.samples(n, m) = y;
        }
    }
    return cap;
}

/// RX-side codebook with a fixed TX beam.
inline FrameCapture transmit_frame(const Channel& channel, const LinkGeometry& link, const CVector& w_t,
                                   const SidelobeCodebook& codebook, const CMatrix& symbols, double noise_sigma,
                                   std::uint64_t seed)
{
    return transmit_frame(channel, link, w_t, codebook, CodebookSide::Rx, symbols, FrameNoise{noise_sigma, seed, 0.0});
}

} // namespace csjcs
