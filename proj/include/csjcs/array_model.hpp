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

// Uniform linear array model: steering vectors, ON/OFF subset weights and
// the array factor of a compressive sidelobe beam.
//
// Angles are degrees from array broadside, positive counter-clockwise.
// Element l (0-based) sits at l * spacing_wl wavelengths along the array axis,
// so a plane wave from angle theta sees phase l * 2*pi * spacing_wl * sin(theta).

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <set>
#include <vector>

#include "csjcs/random.hpp"
#include "csjcs/types.hpp"

namespace csjcs {

__extension__ typedef unsigned __int128 BigCount;

inline std::string to_string(BigCount v)
{
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

inline void check_angle(double angle_deg, const char* what)
{
    if (!(angle_deg >= -90.0 && angle_deg <= 90.0))
        throw std::domain_error(std::string(what) + ": angle " + std::to_string(angle_deg) +
                                " deg outside [-90, 90]");
}

struct ArrayGeometry {
    std::size_t num_elements = 16;
    double spacing_wl = 0.5;
    std::vector<double> phase_error_rad;

    ArrayGeometry() : ArrayGeometry(16) {}
    ArrayGeometry(std::size_t n, double spacing = 0.5, std::vector<double> phase_errors = {})
        : num_elements(n), spacing_wl(spacing), phase_error_rad(std::move(phase_errors))
    {
        if (phase_error_rad.empty()) phase_error_rad.assign(num_elements, 0.0);
        validate();
    }

    void validate() const
    {
        if (num_elements < 1) throw std::domain_error("ArrayGeometry: num_elements must be >= 1");
        if (!(spacing_wl > 0.0)) throw std::domain_error("ArrayGeometry: spacing_wl must be > 0");
        if (phase_error_rad.size() != num_elements)
            throw std::domain_error("ArrayGeometry: phase_error_rad must have num_elements entries");
    }

    double phase_error(std::size_t l) const { return phase_error_rad[l]; }

    bool operator==(const ArrayGeometry&) const = default;
};

/// Strictly increasing element indices of the ON antennas.
struct AntennaSubset {
    std::vector<std::size_t> indices;

    std::size_t size() const { return indices.size(); }

    void validate(std::size_t num_elements) const
    {
        if (indices.empty() || indices.size() > num_elements)
            throw std::domain_error("AntennaSubset: size must be in [1, num_elements]");
        for (std::size_t i = 0; i < indices.size(); ++i) {
            if (indices[i] >= num_elements) throw std::domain_error("AntennaSubset: index out of range");
            if (i > 0 && indices[i] <= indices[i - 1])
                throw std::domain_error("AntennaSubset: indices must be strictly increasing");
        }
    }

    static AntennaSubset full(std::size_t n)
    {
        AntennaSubset s;
        s.indices.resize(n);
        std::iota(s.indices.begin(), s.indices.end(), std::size_t{0});
        return s;
    }

    bool operator==(const AntennaSubset&) const = default;
};

struct SidelobeCodebook {
    ArrayGeometry geometry;
    double mainlobe_deg = 0.0;
    std::vector<AntennaSubset> subsets;
    std::uint64_t seed = 0;
    bool sampled_with_replacement = false;

    std::size_t num_beams() const { return subsets.size(); }
    std::size_t subset_size() const { return subsets.empty() ? 0 : subsets.front().size(); }

    void validate() const
    {
        geometry.validate();
        check_angle(mainlobe_deg, "SidelobeCodebook mainlobe");
        if (subsets.empty()) throw std::domain_error("SidelobeCodebook: needs at least one subset");
        const std::size_t L = subsets.front().size();
        for (const auto& s : subsets) {
            s.validate(geometry.num_elements);
            if (s.size() != L) throw std::domain_error("SidelobeCodebook: subsets must share one size L");
        }
    }

    bool operator==(const SidelobeCodebook&) const = default;
};

inline CVector steering_vector(const ArrayGeometry& geometry, double angle_deg)
{
    check_angle(angle_deg, "steering_vector");
    const double k = 2.0 * kPi * geometry.spacing_wl * std::sin(deg2rad(angle_deg));
    CVector a(geometry.num_elements);
    for (std::size_t l = 0; l < a.size(); ++l)
        a[l] = std::polar(1.0, static_cast<double>(l) * k + geometry.phase_error(l));
    return a;
}

inline CVector make_weight_vector(const SidelobeCodebook& codebook, std::size_t m)
{
    if (m >= codebook.num_beams()) throw std::out_of_range("make_weight_vector: beam index out of range");
    const CVector steer = steering_vector(codebook.geometry, codebook.mainlobe_deg);
    CVector w(codebook.geometry.num_elements, cd{0.0, 0.0});
    for (std::size_t l : codebook.subsets[m].indices) w[l] = steer[l];
    return w;
}

/// All-ON weight vector steered to angle_deg.
inline CVector full_array_weights(const ArrayGeometry& geometry, double angle_deg)
{
    return steering_vector(geometry, angle_deg);
}

/// Hermitian inner product conj(w)^T a.
inline cd inner(const CVector& w, const CVector& a)
{
    if (w.size() != a.size()) throw std::domain_error("inner: length mismatch");
    cd acc{0.0, 0.0};
    for (std::size_t i = 0; i < w.size(); ++i) acc += std::conj(w[i]) * a[i];
    return acc;
}

/// Array factor R(m, theta) = conj(w[m])^T a(theta) in closed form. The element
/// phase errors enter both the weight and the response and cancel.
inline cd array_factor(const SidelobeCodebook& codebook, std::size_t m, double angle_deg)
{
    if (m >= codebook.num_beams()) throw std::out_of_range("array_factor: beam index out of range");
    check_angle(angle_deg, "array_factor");
    const double k = 2.0 * kPi * codebook.geometry.spacing_wl *
                     (std::sin(deg2rad(angle_deg)) - std::sin(deg2rad(codebook.mainlobe_deg)));
    cd acc{0.0, 0.0};
    for (std::size_t l : codebook.subsets[m].indices) acc += std::polar(1.0, static_cast<double>(l) * k);
    return acc;
}

/// Per-element phasors exp(j l k(theta)) for every grid angle: element-major,
/// entry [l * G + g].
inline CVector element_phasor_table(const ArrayGeometry& geometry, double mainlobe_deg,
                                    const std::vector<double>& grid_deg)
{
    const std::size_t G = grid_deg.size();
    const double s0 = std::sin(deg2rad(mainlobe_deg));
    CVector table(geometry.num_elements * G);
    for (std::size_t g = 0; g < G; ++g) {
        check_angle(grid_deg[g], "pattern grid");
        const double k = 2.0 * kPi * geometry.spacing_wl * (std::sin(deg2rad(grid_deg[g])) - s0);
        for (std::size_t l = 0; l < geometry.num_elements; ++l)
            table[l * G + g] = std::polar(1.0, static_cast<double>(l) * k);
    }
    return table;
}

/// R(m, theta_g) for every beam and grid point, beam-major (M x G).
inline CMatrix array_factor_table(const SidelobeCodebook& codebook, const std::vector<double>& grid_deg)
{
    const std::size_t G = grid_deg.size();
    const CVector phasors = element_phasor_table(codebook.geometry, codebook.mainlobe_deg, grid_deg);
    CMatrix R(codebook.num_beams(), G);
    for (std::size_t m = 0; m < codebook.num_beams(); ++m) {
        cd* row = &R(m, 0);
        for (std::size_t l : codebook.subsets[m].indices) {
            const cd* src = &phasors[l * G];
            for (std::size_t g = 0; g < G; ++g) row[g] += src[g];
        }
    }
    return R;
}

/// Exact C(n, k) via Pascal's triangle in 128-bit arithmetic (n <= 128).
inline BigCount randomness_space_size(std::size_t n, std::size_t k)
{
    if (k > n) throw std::domain_error("randomness_space_size: L > N");
    if (n > 128) throw std::domain_error("randomness_space_size: N > 128 not supported");
    std::vector<BigCount> row(n + 1, 0);
    row[0] = 1;
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = std::min(i, k); j >= 1; --j) row[j] += row[j - 1];
    return row[k];
}

inline double directivity_loss_db(std::size_t n, std::size_t num_off)
{
    if (n == 0 || num_off >= n) throw std::domain_error("directivity_loss_db: need 0 <= num_off < N");
    return 20.0 * std::log10(static_cast<double>(n - num_off) / static_cast<double>(n));
}

namespace detail {

inline AntennaSubset draw_subset(Rng& rng, std::size_t n, std::size_t L)
{
    // Partial Fisher-Yates.
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < L; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    AntennaSubset s;
    s.indices.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(L));
    std::sort(s.indices.begin(), s.indices.end());
    return s;
}

} // namespace detail

/// M subsets of size L drawn uniformly. Subsets are pairwise distinct while
/// M <= C(N, L); beyond that they are drawn with replacement and flagged.
inline SidelobeCodebook sample_codebook(const ArrayGeometry& geometry, double mainlobe_deg, std::size_t L,
                                        std::size_t M, std::uint64_t seed)
{
    geometry.validate();
    check_angle(mainlobe_deg, "sample_codebook");
    if (L == 0 || L > geometry.num_elements) throw std::domain_error("sample_codebook: need 1 <= L <= N");
    if (M == 0) throw std::domain_error("sample_codebook: M must be >= 1");

    SidelobeCodebook cb;
    cb.geometry = geometry;
    cb.mainlobe_deg = mainlobe_deg;
    cb.seed = seed;
    cb.subsets.reserve(M);

    const bool distinct = geometry.num_elements > 128 ||
                          randomness_space_size(geometry.num_elements, L) >= static_cast<BigCount>(M);
    cb.sampled_with_replacement = !distinct;

    Rng rng(seed);
    std::set<std::vector<std::size_t>> seen;
    while (cb.subsets.size() < M) {
        AntennaSubset s = detail::draw_subset(rng, geometry.num_elements, L);
        if (distinct && !seen.insert(s.indices).second) continue;
        cb.subsets.push_back(std::move(s));
    }
    return cb;
}

/// Codebook whose every beam is the full array (no sidelobe perturbation).
inline SidelobeCodebook full_array_codebook(const ArrayGeometry& geometry, double mainlobe_deg, std::size_t M)
{
    SidelobeCodebook cb;
    cb.geometry = geometry;
    cb.mainlobe_deg = mainlobe_deg;
    cb.subsets.assign(M, AntennaSubset::full(geometry.num_elements));
    cb.sampled_with_replacement = M > 1;
    return cb;
}

// ---------------------------------------------------------------------------
// Mainlobe-to-sidelobe margin

/// Which angles count as "sidelobe" when computing the margin.
struct SidelobeRegion {
    enum class Kind {
        /// |sin(theta) - sin(theta0)| >= 1 / (N d): outside the first nulls of the
        /// full (all-ON) array pattern around the mainlobe.
        OutsideFullArrayMainBeam,
        /// |theta - theta0| >= half_width_deg.
        OutsideWindow,
    };
    Kind kind = Kind::OutsideFullArrayMainBeam;
    double half_width_deg = 0.0;
    double limit_deg = 90.0; // only |theta| <= limit_deg is scanned
};

struct MarginOptions {
    SidelobeRegion region;
    double grid_step_deg = 0.1;
    std::uint64_t enumeration_cap = 200000; // above this many subsets, sample instead
    std::size_t sample_count = 20000;
    std::uint64_t seed = 1;
};

struct MarginReport {
    double min_margin_db = 0.0;
    double mean_margin_db = 0.0;
    AntennaSubset worst_subset;
    double worst_angle_deg = 0.0;
    std::uint64_t subsets_evaluated = 0;
    bool exhaustive = false;
};

inline std::vector<double> sidelobe_angles(const ArrayGeometry& geometry, double mainlobe_deg,
                                           const SidelobeRegion& region, double step_deg)
{
    const AngleGrid grid{-region.limit_deg, region.limit_deg, step_deg};
    const double s0 = std::sin(deg2rad(mainlobe_deg));
    const double null_offset = 1.0 / (static_cast<double>(geometry.num_elements) * geometry.spacing_wl);
    std::vector<double> out;
    for (double a : grid.points()) {
        bool keep = false;
        if (region.kind == SidelobeRegion::Kind::OutsideFullArrayMainBeam)
            keep = std::abs(std::sin(deg2rad(a)) - s0) >= null_offset - 1e-12;
        else
            keep = std::abs(a - mainlobe_deg) >= region.half_width_deg - 1e-12;
        if (keep) out.push_back(a);
    }
    return out;
}

inline MarginReport margin_report(const ArrayGeometry& geometry, std::size_t L, double mainlobe_deg,
                                  const MarginOptions& options = {})
{
    geometry.validate();
    check_angle(mainlobe_deg, "mainlobe_sidelobe_margin_db");
    const std::size_t N = geometry.num_elements;
    if (L == 0 || L >= N) throw std::domain_error("mainlobe_sidelobe_margin_db: need 1 <= L < N");

    const std::vector<double> angles = sidelobe_angles(geometry, mainlobe_deg, options.region, options.grid_step_deg);
    if (angles.empty()) throw std::domain_error("mainlobe_sidelobe_margin_db: empty sidelobe region");

    const std::size_t G = angles.size();
    const CVector phasors = element_phasor_table(geometry, mainlobe_deg, angles);
    const double mainlobe_db = 20.0 * std::log10(static_cast<double>(L));

    MarginReport rep;
    rep.min_margin_db = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    CVector acc(G);

    auto evaluate = [&](const AntennaSubset& s) {
        std::fill(acc.begin(), acc.end(), cd{0.0, 0.0});
        for (std::size_t l : s.indices) {
            const cd* src = &phasors[l * G];
            for (std::size_t g = 0; g < G; ++g) acc[g] += src[g];
        }
        double peak = 0.0;
        std::size_t peak_g = 0;
        for (std::size_t g = 0; g < G; ++g) {
            const double v = std::abs(acc[g]);
            if (v > peak) {
                peak = v;
                peak_g = g;
            }
        }
        const double margin = mainlobe_db - 20.0 * std::log10(peak);
        sum += margin;
        ++rep.subsets_evaluated;
        if (margin < rep.min_margin_db) {
            rep.min_margin_db = margin;
            rep.worst_subset = s;
            rep.worst_angle_deg = angles[peak_g];
        }
    };

    const bool exhaustive = N <= 128 && randomness_space_size(N, L) <= options.enumeration_cap;
    rep.exhaustive = exhaustive;
    if (exhaustive) {
        // Lexicographic walk over all L-combinations.
        AntennaSubset s = AntennaSubset::full(L);
        while (true) {
            evaluate(s);
            std::size_t i = L;
            while (i > 0 && s.indices[i - 1] == N - L + (i - 1)) --i;
            if (i == 0) break;
            ++s.indices[i - 1];
            for (std::size_t j = i; j < L; ++j) s.indices[j] = s.indices[j - 1] + 1;
        }
    } else {
        Rng rng(options.seed);
        for (std::size_t k = 0; k < options.sample_count; ++k) evaluate(detail::draw_subset(rng, N, L));
    }
    rep.mean_margin_db = sum / static_cast<double>(rep.subsets_evaluated);
    return rep;
}

/// Worst-case (minimum over subsets) mainlobe-to-sidelobe margin in dB.
inline double mainlobe_sidelobe_margin_db(const ArrayGeometry& geometry, std::size_t L, double mainlobe_deg,
                                          const MarginOptions& options = {})
{
    return margin_report(geometry, L, mainlobe_deg, options).min_margin_db;
}

} // namespace csjcs
