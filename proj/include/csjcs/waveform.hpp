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

// Gray-mapped PAM4 / QAM4 / QAM16 with unit average symbol energy, a
// single-tap least-squares equalizer and minimum-distance detection against
// a scaled decision boundary.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "csjcs/random.hpp"
#include "csjcs/types.hpp"

namespace csjcs {

using Bits = std::vector<std::uint8_t>; // one bit (0 or 1) per entry

enum class Modulation { PAM4, QAM4, QAM16 };

inline const char* to_string(Modulation m)
{
    switch (m) {
    case Modulation::PAM4: return "PAM4";
    case Modulation::QAM4: return "QAM4";
    case Modulation::QAM16: return "QAM16";
    }
    return "?";
}

inline Modulation parse_modulation(std::string_view s)
{
    if (s == "PAM4") return Modulation::PAM4;
    if (s == "QAM4") return Modulation::QAM4;
    if (s == "QAM16") return Modulation::QAM16;
    throw std::domain_error("unknown modulation '" + std::string(s) + "'");
}

/// constellation[label] is the point for the bit label read MSB first.
struct ModulationScheme {
    Modulation kind = Modulation::QAM4;
    std::size_t bits_per_symbol = 2;
    CVector constellation;
};

namespace detail {

// Gray-coded 4-level amplitude for a 2-bit label: 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3.
inline double gray_pam4_level(unsigned label)
{
    static constexpr double levels[4] = {-3.0, -1.0, 3.0, 1.0};
    return levels[label & 3u];
}

} // namespace detail

inline ModulationScheme make_scheme(Modulation kind)
{
    ModulationScheme s;
    s.kind = kind;
    switch (kind) {
    case Modulation::PAM4: {
        s.bits_per_symbol = 2;
        const double k = 1.0 / std::sqrt(5.0);
        for (unsigned lab = 0; lab < 4; ++lab) s.constellation.emplace_back(detail::gray_pam4_level(lab) * k, 0.0);
        break;
    }
    case Modulation::QAM4: {
        s.bits_per_symbol = 2;
        const double k = 1.0 / std::sqrt(2.0);
        // first bit selects the I sign, second the Q sign
        for (unsigned lab = 0; lab < 4; ++lab)
            s.constellation.emplace_back((lab & 2u) ? -k : k, (lab & 1u) ? -k : k);
        break;
    }
    case Modulation::QAM16: {
        s.bits_per_symbol = 4;
        const double k = 1.0 / std::sqrt(10.0);
        for (unsigned lab = 0; lab < 16; ++lab)
            s.constellation.emplace_back(detail::gray_pam4_level(lab >> 2) * k, detail::gray_pam4_level(lab) * k);
        break;
    }
    }
    return s;
}

inline CVector modulate(const Bits& bits, const ModulationScheme& scheme)
{
    const std::size_t b = scheme.bits_per_symbol;
    if (bits.size() % b != 0)
        throw std::domain_error("modulate: bit count " + std::to_string(bits.size()) + " is not a multiple of " +
                                std::to_string(b));
    CVector out(bits.size() / b);
    for (std::size_t i = 0; i < out.size(); ++i) {
        unsigned lab = 0;
        for (std::size_t j = 0; j < b; ++j) {
            const auto bit = bits[i * b + j];
            if (bit > 1) throw std::domain_error("modulate: bit values must be 0 or 1");
            lab = (lab << 1) | bit;
        }
        out[i] = scheme.constellation[lab];
    }
    return out;
}

inline CVector modulate(const Bits& bits, Modulation kind) { return modulate(bits, make_scheme(kind)); }

struct Demodulated {
    Bits bits;
    CVector symbols; // decided constellation points
};

/// Minimum-distance detection of samples / (g_hat * scale). Ties go to the
/// smaller label.
inline Demodulated demodulate(const CVector& samples, cd g_hat, const ModulationScheme& scheme, double scale)
{
    const cd eff = g_hat * scale;
    if (!(std::abs(eff) > 0.0) || !std::isfinite(std::abs(eff)))
        throw std::domain_error("demodulate: effective gain must be finite and nonzero");
    const std::size_t b = scheme.bits_per_symbol;
    const cd inv = 1.0 / eff;
    Demodulated out;
    out.bits.resize(samples.size() * b);
    out.symbols.resize(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const cd z = samples[i] * inv;
        std::size_t best = 0;
        double best_d = std::norm(z - scheme.constellation[0]);
        for (std::size_t lab = 1; lab < scheme.constellation.size(); ++lab) {
            const double d = std::norm(z - scheme.constellation[lab]);
            if (d < best_d) {
                best_d = d;
                best = lab;
            }
        }
        out.symbols[i] = scheme.constellation[best];
        for (std::size_t j = 0; j < b; ++j) out.bits[i * b + j] = static_cast<std::uint8_t>((best >> (b - 1 - j)) & 1u);
    }
    return out;
}

/// Least-squares single-tap gain: sum(conj(s) y) / sum(|s|^2).
inline cd estimate_equalizer(const CVector& rx_preamble, const CVector& known_preamble)
{
    if (rx_preamble.size() != known_preamble.size())
        throw std::domain_error("estimate_equalizer: preamble lengths differ");
    if (known_preamble.empty()) throw std::domain_error("estimate_equalizer: empty preamble");
    cd num{0.0, 0.0};
    double den = 0.0;
    for (std::size_t i = 0; i < known_preamble.size(); ++i) {
        num += std::conj(known_preamble[i]) * rx_preamble[i];
        den += std::norm(known_preamble[i]);
    }
    if (!(den > 0.0)) throw std::domain_error("estimate_equalizer: all-zero preamble");
    return num / den;
}

inline std::size_t bit_errors(const Bits& a, const Bits& b)
{
    if (a.size() != b.size()) throw std::domain_error("bit_errors: length mismatch");
    std::size_t e = 0;
    for (std::size_t i = 0; i < a.size(); ++i) e += (a[i] != b[i]);
    return e;
}

inline double bit_error_rate(const Bits& a, const Bits& b)
{
    if (a.size() != b.size()) throw std::domain_error("bit_error_rate: length mismatch");
    if (a.empty()) throw std::domain_error("bit_error_rate: empty bit streams");
    return static_cast<double>(bit_errors(a, b)) / static_cast<double>(a.size());
}

inline Bits random_bits(std::size_t count, Rng& rng)
{
    Bits out(count);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < count; ++i) {
        if (i % 64 == 0) word = rng();
        out[i] = static_cast<std::uint8_t>(word & 1u);
        word >>= 1;
    }
    return out;
}

struct Packet {
    CVector preamble;
    Bits payload_bits;

    void validate(const ModulationScheme& scheme) const
    {
        if (preamble.empty()) throw std::domain_error("Packet: preamble length must be >= 1");
        if (payload_bits.size() % scheme.bits_per_symbol != 0)
            throw std::domain_error("Packet: payload length is not a multiple of bits per symbol");
    }
};

/// Random QPSK preamble of length P.
inline CVector make_preamble(std::size_t length, Rng& rng)
{
    if (length == 0) throw std::domain_error("make_preamble: length must be >= 1");
    return modulate(random_bits(2 * length, rng), Modulation::QAM4);
}

} // namespace csjcs
