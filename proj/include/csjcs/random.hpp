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
#include <random>
#include <string_view>

#include "csjcs/types.hpp"

namespace csjcs {

using Rng = std::mt19937_64;

// splitmix64 finalizer; used only to decorrelate derived seeds.
inline std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt)
{
    return mix64(master ^ mix64(salt));
}

inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag, std::uint64_t value = 0)
{
    // FNV-1a over the tag, then folded with the value.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return derive_seed(derive_seed(master, h), value);
}

/// Circularly-symmetric complex Gaussian with E|z|^2 = sigma^2.
inline cd complex_gaussian(Rng& rng, double sigma)
{
    std::normal_distribution<double> n01(0.0, 1.0);
    const double s = sigma / std::sqrt(2.0);
    const double re = n01(rng);
    const double im = n01(rng);
    return {s * re, s * im};
}

} // namespace csjcs
