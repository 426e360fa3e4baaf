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

#include <catch_amalgamated.hpp>

#include <bit>
#include <set>

#include "csjcs/array_model.hpp"

using namespace csjcs;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Independent pattern oracle: explicit per-element phasor sum with std::exp.
cd oracle_af(std::size_t n, double d, const std::vector<std::size_t>& on, double th0_deg, double th_deg)
{
    (void)n;
    cd acc = 0.0;
    const double s0 = std::sin(th0_deg * kPi / 180.0);
    const double s = std::sin(th_deg * kPi / 180.0);
    for (std::size_t l : on) acc += std::exp(cd(0.0, 2.0 * kPi * d * static_cast<double>(l) * (s - s0)));
    return acc;
}

std::uint64_t binom_oracle(std::uint64_t n, std::uint64_t k)
{
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

} // namespace

TEST_CASE("steering vector entries")
{
    SECTION("broadside is all ones")
    {
        for (const cd& v : steering_vector(ArrayGeometry(4), 0.0)) CHECK(std::abs(v - cd(1.0, 0.0)) < 1e-15);
    }
    SECTION("endfire with half-wavelength spacing alternates sign")
    {
        const CVector a = steering_vector(ArrayGeometry(2), 90.0);
        CHECK(std::abs(a[0] - cd(1.0, 0.0)) < 1e-15);
        CHECK(std::abs(a[1] - cd(-1.0, 0.0)) < 1e-12);
    }
    SECTION("N=8, d=0.57, 30 deg against direct evaluation")
    {
        const CVector a = steering_vector(ArrayGeometry(8, 0.57), 30.0);
        for (std::size_t l = 0; l < 8; ++l) {
            const cd expect = std::exp(cd(0.0, static_cast<double>(l) * 2.0 * kPi * 0.57 * 0.5));
            CHECK(std::abs(a[l] - expect) < 1e-12);
            CHECK_THAT(std::abs(a[l]), WithinAbs(1.0, 1e-15));
        }
    }
    SECTION("phase errors add per element")
    {
        ArrayGeometry g(3, 0.5, {0.1, -0.2, 0.3});
        const CVector a = steering_vector(g, 0.0);
        CHECK_THAT(std::arg(a[1]), WithinAbs(-0.2, 1e-15));
        CHECK_THAT(std::arg(a[2]), WithinAbs(0.3, 1e-15));
    }
    SECTION("out-of-range angle")
    {
        CHECK_THROWS_AS(steering_vector(ArrayGeometry(4), 90.5), std::domain_error);
        CHECK_THROWS_AS(steering_vector(ArrayGeometry(4), -91.0), std::domain_error);
    }
}

TEST_CASE("array geometry invariants")
{
    CHECK_THROWS_AS(ArrayGeometry(0), std::domain_error);
    CHECK_THROWS_AS(ArrayGeometry(4, 0.0), std::domain_error);
    CHECK_THROWS_AS(ArrayGeometry(4, 0.5, {0.0, 0.0}), std::domain_error);
    CHECK(ArrayGeometry().phase_error_rad.size() == 16);
}

TEST_CASE("weight vectors")
{
    SECTION("full subset equals the steering vector")
    {
        const ArrayGeometry g(6, 0.5);
        const SidelobeCodebook cb = full_array_codebook(g, 17.0, 1);
        const CVector w = make_weight_vector(cb, 0);
        const CVector a = steering_vector(g, 17.0);
        for (std::size_t l = 0; l < 6; ++l) CHECK(w[l] == a[l]);
    }
    SECTION("single element subset")
    {
        SidelobeCodebook cb;
        cb.geometry = ArrayGeometry(5);
        cb.mainlobe_deg = 12.0;
        cb.subsets = {AntennaSubset{{0}}};
        const CVector w = make_weight_vector(cb, 0);
        CHECK_THAT(std::abs(w[0]), WithinAbs(1.0, 1e-15));
        for (std::size_t l = 1; l < 5; ++l) CHECK(w[l] == cd(0.0, 0.0));
    }
    SECTION("N=16, L=12 broadside has 12 ones and 4 exact zeros")
    {
        const SidelobeCodebook cb = sample_codebook(ArrayGeometry(16), 0.0, 12, 5, 3);
        for (std::size_t m = 0; m < 5; ++m) {
            const CVector w = make_weight_vector(cb, m);
            int ones = 0, zeros = 0;
            for (const cd& v : w) {
                if (v == cd(0.0, 0.0))
                    ++zeros;
                else if (std::abs(v - cd(1.0, 0.0)) < 1e-15)
                    ++ones;
            }
            CHECK(ones == 12);
            CHECK(zeros == 4);
        }
    }
    SECTION("beam index out of range")
    {
        const SidelobeCodebook cb = sample_codebook(ArrayGeometry(4), 0.0, 2, 3, 1);
        CHECK_THROWS_AS(make_weight_vector(cb, 3), std::out_of_range);
        CHECK_THROWS_AS(array_factor(cb, 3, 0.0), std::out_of_range);
    }
}

TEST_CASE("array factor values")
{
    SECTION("mainlobe gives L exactly")
    {
        const SidelobeCodebook cb = sample_codebook(ArrayGeometry(16), 20.0, 12, 10, 9);
        for (std::size_t m = 0; m < 10; ++m) {
            const cd r = array_factor(cb, m, 20.0);
            CHECK(r.real() == 12.0);
            CHECK(r.imag() == 0.0);
        }
    }
    SECTION("full 16-element array at broadside")
    {
        const SidelobeCodebook cb = full_array_codebook(ArrayGeometry(16), 0.0, 1);
        CHECK(array_factor(cb, 0, 0.0) == cd(16.0, 0.0));
    }
    SECTION("two-term sum at endfire")
    {
        SidelobeCodebook cb;
        cb.geometry = ArrayGeometry(4);
        cb.subsets = {AntennaSubset{{0, 2}}};
        const cd r = array_factor(cb, 0, 90.0);
        CHECK(std::abs(r - cd(2.0, 0.0)) < 1e-12);
    }
}

TEST_CASE("array factor properties over random codebooks")
{
    Rng rng(2024);
    std::uniform_int_distribution<std::size_t> n_dist(1, 32);
    std::uniform_real_distribution<double> ang(-90.0, 90.0);
    std::uniform_real_distribution<double> spacing(0.2, 1.0);
    std::uniform_real_distribution<double> pe(-kPi, kPi);
    int checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = n_dist(rng);
        std::uniform_int_distribution<std::size_t> l_dist(1, n);
        const std::size_t L = l_dist(rng);
        std::vector<double> errs(n);
        for (double& e : errs) e = pe(rng);
        const ArrayGeometry g(n, spacing(rng), errs);
        const double th0 = ang(rng);
        const SidelobeCodebook cb = sample_codebook(g, th0, L, 3, rng());
        for (std::size_t m = 0; m < cb.num_beams(); ++m) {
            const double th = ang(rng);
            const cd closed = array_factor(cb, m, th);
            const cd ip = inner(make_weight_vector(cb, m), steering_vector(g, th));
            REQUIRE(std::abs(closed - ip) < 1e-9);
            REQUIRE(std::abs(closed) <= static_cast<double>(L) + 1e-9);
            REQUIRE(std::abs(closed - oracle_af(n, g.spacing_wl, cb.subsets[m].indices, th0, th)) < 1e-9);
            const cd at0 = inner(make_weight_vector(cb, m), steering_vector(g, th0));
            REQUIRE(std::abs(at0 - cd(static_cast<double>(L), 0.0)) < 1e-9);
            ++checked;
        }
    }
    CHECK(checked == 3000);
}

TEST_CASE("full subset reproduces the classic ULA pattern")
{
    const std::size_t N = 16;
    const double d = 0.5;
    for (double th0 : {0.0, 25.0, -40.0}) {
        const SidelobeCodebook cb = full_array_codebook(ArrayGeometry(N, d), th0, 1);
        for (double th = -89.0; th <= 89.0; th += 0.37) {
            const double u = kPi * d * (std::sin(th0 * kPi / 180.0) - std::sin(th * kPi / 180.0));
            if (std::abs(std::sin(u)) < 1e-3) continue;
            const double classic = std::abs(std::sin(static_cast<double>(N) * u) / std::sin(u));
            if (classic < 1e-6) continue;
            CHECK_THAT(std::abs(array_factor(cb, 0, th)), WithinRel(classic, 1e-8));
        }
    }
}

TEST_CASE("table evaluation agrees with pointwise evaluation")
{
    const SidelobeCodebook cb = sample_codebook(ArrayGeometry(12, 0.5), 10.0, 8, 7, 5);
    const std::vector<double> grid = AngleGrid{-60.0, 60.0, 1.5}.points();
    const CMatrix R = array_factor_table(cb, grid);
    for (std::size_t m = 0; m < 7; ++m)
        for (std::size_t g = 0; g < grid.size(); ++g) CHECK(std::abs(R(m, g) - array_factor(cb, m, grid[g])) < 1e-12);
}

TEST_CASE("codebook sampling")
{
    SECTION("full array has a single subset")
    {
        const SidelobeCodebook cb = sample_codebook(ArrayGeometry(16), 0.0, 16, 1, 77);
        REQUIRE(cb.num_beams() == 1);
        CHECK(cb.subsets[0] == AntennaSubset::full(16));
    }
    SECTION("189 distinct subsets of 12 out of 16")
    {
        const SidelobeCodebook cb = sample_codebook(ArrayGeometry(16), 0.0, 12, 189, 7);
        std::set<std::vector<std::size_t>> seen;
        for (const auto& s : cb.subsets) {
            CHECK(s.size() == 12);
            seen.insert(s.indices);
        }
        CHECK(seen.size() == 189);
        CHECK_FALSE(cb.sampled_with_replacement);
        CHECK_NOTHROW(cb.validate());
    }
    SECTION("N=4, L=2, M=6 covers every pair")
    {
        const SidelobeCodebook cb = sample_codebook(ArrayGeometry(4), 0.0, 2, 6, 1);
        std::set<std::vector<std::size_t>> seen;
        for (const auto& s : cb.subsets) seen.insert(s.indices);
        std::set<std::vector<std::size_t>> all;
        for (std::size_t a = 0; a < 4; ++a)
            for (std::size_t b = a + 1; b < 4; ++b) all.insert({a, b});
        CHECK(seen == all);
    }
    SECTION("more beams than subsets falls back to replacement")
    {
        const SidelobeCodebook cb = sample_codebook(ArrayGeometry(16), 0.0, 15, 40, 1);
        CHECK(cb.num_beams() == 40);
        CHECK(cb.sampled_with_replacement);
    }
    SECTION("bit-identical for a fixed seed, different across seeds")
    {
        const auto a = sample_codebook(ArrayGeometry(16), 0.0, 12, 189, 11);
        const auto b = sample_codebook(ArrayGeometry(16), 0.0, 12, 189, 11);
        const auto c = sample_codebook(ArrayGeometry(16), 0.0, 12, 189, 12);
        CHECK(a == b);
        CHECK_FALSE(a == c);
    }
    SECTION("draws are roughly uniform over elements")
    {
        const auto cb = sample_codebook(ArrayGeometry(16), 0.0, 12, 1820, 5);
        // Every subset of the space is drawn exactly once, so each element is ON in C(15,11) of them.
        std::vector<std::size_t> on(16, 0);
        for (const auto& s : cb.subsets)
            for (std::size_t l : s.indices) ++on[l];
        for (std::size_t c : on) CHECK(c == binom_oracle(15, 11));
    }
    SECTION("invalid sizes")
    {
        CHECK_THROWS_AS(sample_codebook(ArrayGeometry(16), 0.0, 0, 5, 1), std::domain_error);
        CHECK_THROWS_AS(sample_codebook(ArrayGeometry(16), 0.0, 17, 5, 1), std::domain_error);
        CHECK_THROWS_AS(sample_codebook(ArrayGeometry(16), 0.0, 4, 0, 1), std::domain_error);
    }
}

TEST_CASE("randomness space size")
{
    CHECK(randomness_space_size(16, 12) == 1820);
    CHECK(randomness_space_size(64, 62) == 2016);
    CHECK(randomness_space_size(9, 9) == 1);
    CHECK(randomness_space_size(9, 0) == 1);
    // Reference value from an arbitrary-precision binomial.
    CHECK(to_string(randomness_space_size(128, 64)) == "23951146041928082866135587776380551750");
    CHECK_THROWS_AS(randomness_space_size(4, 5), std::domain_error);
    for (std::size_t n = 1; n <= 32; ++n)
        for (std::size_t l = 1; l <= n; ++l) {
            REQUIRE(randomness_space_size(n, l) ==
                    randomness_space_size(n - 1, l - 1) + (l <= n - 1 ? randomness_space_size(n - 1, l) : 0));
            REQUIRE(randomness_space_size(n, l) == binom_oracle(n, l));
        }
}

TEST_CASE("directivity loss")
{
    CHECK_THAT(directivity_loss_db(64, 2), WithinAbs(-0.2758, 1e-4));
    CHECK(directivity_loss_db(10, 0) == 0.0);
    CHECK_THAT(directivity_loss_db(16, 4), WithinAbs(20.0 * std::log10(0.75), 1e-12));
    CHECK_THAT(directivity_loss_db(16, 4), WithinAbs(-2.4988, 1e-4));
    CHECK_THROWS_AS(directivity_loss_db(8, 8), std::domain_error);
}

TEST_CASE("mainlobe-to-sidelobe margin")
{
    SECTION("single element of two is isotropic")
    {
        CHECK_THAT(mainlobe_sidelobe_margin_db(ArrayGeometry(2), 1, 0.0), WithinAbs(0.0, 1e-12));
    }
    SECTION("N=8, L=6 against a brute-force oracle")
    {
        // Oracle: every 6-subset of 8, direct summation on a 0.1 deg grid
        // outside the full-array first nulls.
        const std::size_t N = 8, L = 6;
        double worst = std::numeric_limits<double>::infinity();
        int subsets = 0;
        for (unsigned mask = 0; mask < (1u << N); ++mask) {
            if (std::popcount(mask) != static_cast<int>(L)) continue;
            std::vector<std::size_t> on;
            for (std::size_t l = 0; l < N; ++l)
                if (mask & (1u << l)) on.push_back(l);
            double peak = 0.0;
            for (int i = -900; i <= 900; ++i) {
                const double th = i * 0.1;
                if (std::abs(std::sin(th * kPi / 180.0)) < 1.0 / (N * 0.5) - 1e-12) continue;
                peak = std::max(peak, std::abs(oracle_af(N, 0.5, on, 0.0, th)));
            }
            worst = std::min(worst, 20.0 * std::log10(static_cast<double>(L) / peak));
            ++subsets;
        }
        REQUIRE(subsets == 28);
        const MarginReport rep = margin_report(ArrayGeometry(N), L, 0.0);
        CHECK(rep.exhaustive);
        CHECK(rep.subsets_evaluated == 28);
        CHECK_THAT(rep.min_margin_db, WithinAbs(worst, 1e-9));
    }
    SECTION("window region and sampling")
    {
        MarginOptions opt;
        opt.region.kind = SidelobeRegion::Kind::OutsideWindow;
        opt.region.half_width_deg = 10.0;
        const double exhaustive = mainlobe_sidelobe_margin_db(ArrayGeometry(10), 7, 0.0, opt);
        opt.enumeration_cap = 10;
        opt.sample_count = 3000;
        const MarginReport sampled = margin_report(ArrayGeometry(10), 7, 0.0, opt);
        CHECK_FALSE(sampled.exhaustive);
        // The sampled minimum can only be higher or equal; with 3000 draws of 120 it hits the worst.
        CHECK_THAT(sampled.min_margin_db, WithinAbs(exhaustive, 1e-12));
    }
    SECTION("errors")
    {
        CHECK_THROWS_AS(mainlobe_sidelobe_margin_db(ArrayGeometry(8), 8, 0.0), std::domain_error);
        MarginOptions opt;
        opt.region.kind = SidelobeRegion::Kind::OutsideWindow;
        opt.region.half_width_deg = 200.0;
        CHECK_THROWS_AS(mainlobe_sidelobe_margin_db(ArrayGeometry(8), 6, 0.0, opt), std::domain_error);
    }
}
