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

// NLOS sensing from a data-modulated frame:
//
//   A_ML  = mean_{n,m} |y[n,m] / s[n,m]|
//   F[m]  = mean_n | |y[n,m] / s[n,m]| - A_ML |
//   score = sum_m F[m] |R(m, phi)|
//
// plus the literal complex-minus-real fingerprint and a coherent variant that
// keeps the phase of y / s and correlates against R itself.

#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "csjcs/frame.hpp"

namespace csjcs {

enum class EstimatorVariant { NonCoherent, NonCoherentComplex, Coherent };

inline const char* to_string(EstimatorVariant v)
{
    switch (v) {
    case EstimatorVariant::NonCoherent: return "noncoherent";
    case EstimatorVariant::NonCoherentComplex: return "noncoherent_complex";
    case EstimatorVariant::Coherent: return "coherent";
    }
    return "?";
}

inline EstimatorVariant parse_variant(std::string_view s)
{
    if (s == "noncoherent") return EstimatorVariant::NonCoherent;
    if (s == "noncoherent_complex") return EstimatorVariant::NonCoherentComplex;
    if (s == "coherent") return EstimatorVariant::Coherent;
    throw std::domain_error("unknown estimator variant '" + std::string(s) + "'");
}

/// How the beam-wise correlation is normalised before peak search.
///  None:         sum_m F[m] T(m, phi) as written.
///  TemplateNorm: divided by ||T(., phi)||.
///  Centered:     F and T(., phi) both mean-removed over m, divided by the
///                centered template norm (clamped at 0 for the real variants).
enum class SpectrumNorm { None, TemplateNorm, Centered };

inline const char* to_string(SpectrumNorm n)
{
    switch (n) {
    case SpectrumNorm::None: return "none";
    case SpectrumNorm::TemplateNorm: return "template_norm";
    case SpectrumNorm::Centered: return "centered";
    }
    return "?";
}

inline SpectrumNorm parse_spectrum_norm(std::string_view s)
{
    if (s == "none") return SpectrumNorm::None;
    if (s == "template_norm") return SpectrumNorm::TemplateNorm;
    if (s == "centered") return SpectrumNorm::Centered;
    throw std::domain_error("unknown spectrum normalization '" + std::string(s) + "'");
}

struct Fingerprint {
    CVector values; // imaginary parts are zero for the non-coherent variants
    EstimatorVariant variant = EstimatorVariant::NonCoherent;
    cd a_ml{0.0, 0.0};
};

namespace detail {

inline void check_capture(const FrameCapture& cap)
{
    if (cap.samples.rows() == 0 || cap.samples.cols() == 0)
        throw std::domain_error("sensing: capture must have at least one sample");
    if (cap.symbols_used.rows() != cap.samples.rows() || cap.symbols_used.cols() != cap.samples.cols())
        throw std::domain_error("sensing: symbol matrix shape differs from the sample matrix");
    for (const cd& s : cap.symbols_used.data())
        if (s == cd{0.0, 0.0}) throw std::domain_error("sensing: zero symbol in symbols_used");
}

} // namespace detail

inline double estimate_mainlobe_amplitude(const FrameCapture& cap)
{
    detail::check_capture(cap);
    double acc = 0.0;
    const auto& y = cap.samples.data();
    const auto& s = cap.symbols_used.data();
    for (std::size_t i = 0; i < y.size(); ++i) acc += std::abs(y[i]) / std::abs(s[i]);
    return acc / static_cast<double>(y.size());
}

/// Complex mean of y / s; the coherent counterpart of the mainlobe amplitude.
inline cd estimate_mainlobe_complex(const FrameCapture& cap)
{
    detail::check_capture(cap);
    cd acc{0.0, 0.0};
    const auto& y = cap.samples.data();
    const auto& s = cap.symbols_used.data();
    for (std::size_t i = 0; i < y.size(); ++i) acc += y[i] / s[i];
    return acc / static_cast<double>(y.size());
}

inline Fingerprint compute_fingerprint(const FrameCapture& cap, cd a_ml, EstimatorVariant variant)
{
    detail::check_capture(cap);
    if (!std::isfinite(a_ml.real()) || !std::isfinite(a_ml.imag()))
        throw std::domain_error("compute_fingerprint: A_ML must be finite");
    if (variant != EstimatorVariant::Coherent && a_ml.imag() != 0.0)
        throw std::domain_error("compute_fingerprint: non-coherent variants take a real A_ML");

    const std::size_t N = cap.samples.rows();
    const std::size_t M = cap.samples.cols();
    Fingerprint fp;
    fp.variant = variant;
    fp.a_ml = a_ml;
    fp.values.assign(M, cd{0.0, 0.0});
    for (std::size_t m = 0; m < M; ++m) {
        cd acc{0.0, 0.0};
        for (std::size_t n = 0; n < N; ++n) {
            const cd y = cap.samples(n, m);
            const cd s = cap.symbols_used(n, m);
            switch (variant) {
            case EstimatorVariant::NonCoherent: acc += std::abs(std::abs(y) / std::abs(s) - a_ml.real()); break;
            case EstimatorVariant::NonCoherentComplex: acc += std::abs(y / s - a_ml.real()); break;
            case EstimatorVariant::Coherent: acc += y / s - a_ml; break;
            }
        }
        fp.values[m] = acc / static_cast<double>(N);
    }
    return fp;
}

/// Fingerprint with the A_ML appropriate for the variant.
inline Fingerprint compute_fingerprint(const FrameCapture& cap, EstimatorVariant variant)
{
    const cd a_ml = variant == EstimatorVariant::Coherent ? estimate_mainlobe_complex(cap)
                                                          : cd{estimate_mainlobe_amplitude(cap), 0.0};
    return compute_fingerprint(cap, a_ml, variant);
}

struct AngleSpectrum {
    std::vector<double> grid_deg;
    std::vector<double> scores;
    double los_deg = 0.0;
    double exclusion_deg = 3.3; // half-width of the window around los_deg skipped by peak search
};

struct SpectrumOptions {
    SpectrumNorm norm = SpectrumNorm::Centered;
    double los_deg = 0.0;
    double exclusion_deg = 3.3;
};

/// Beam-major template table for the codebook: R(m, phi) when the codebook sits
/// at the receiver, conj(R(m, phi)) when it sits at the transmitter.
inline CMatrix template_table(const SidelobeCodebook& codebook, CodebookSide side, const std::vector<double>& grid)
{
    CMatrix T = array_factor_table(codebook, grid);
    if (side == CodebookSide::Tx)
        for (cd& v : T.data()) v = std::conj(v);
    return T;
}

inline AngleSpectrum angle_spectrum(const Fingerprint& fp, const CMatrix& templates, const std::vector<double>& grid,
                                    const SpectrumOptions& opt = {})
{
    const std::size_t M = fp.values.size();
    const std::size_t G = grid.size();
    if (G == 0) throw std::domain_error("angle_spectrum: empty grid");
    if (templates.rows() != M || templates.cols() != G)
        throw std::domain_error("angle_spectrum: template table is not M x G");
    for (std::size_t g = 1; g < G; ++g)
        if (!(grid[g] > grid[g - 1])) throw std::domain_error("angle_spectrum: grid must be strictly increasing");

    const bool coherent = fp.variant == EstimatorVariant::Coherent;
    const bool centered = opt.norm == SpectrumNorm::Centered;

    CVector f = fp.values;
    if (centered) {
        const cd mean = std::accumulate(f.begin(), f.end(), cd{0.0, 0.0}) / static_cast<double>(M);
        for (cd& v : f) v -= mean;
    }

    AngleSpectrum sp;
    sp.grid_deg = grid;
    sp.scores.assign(G, 0.0);
    sp.los_deg = opt.los_deg;
    sp.exclusion_deg = opt.exclusion_deg;

    std::vector<cd> t(M);
    for (std::size_t g = 0; g < G; ++g) {
        for (std::size_t m = 0; m < M; ++m) t[m] = coherent ? templates(m, g) : cd{std::abs(templates(m, g)), 0.0};
        if (centered) {
            const cd mean = std::accumulate(t.begin(), t.end(), cd{0.0, 0.0}) / static_cast<double>(M);
            for (cd& v : t) v -= mean;
        }
        cd corr{0.0, 0.0};
        double tnorm2 = 0.0;
        for (std::size_t m = 0; m < M; ++m) {
            corr += f[m] * std::conj(t[m]);
            tnorm2 += std::norm(t[m]);
        }
        double score = coherent ? std::abs(corr) : corr.real();
        if (opt.norm != SpectrumNorm::None) {
            const double tn = std::sqrt(tnorm2);
            // A template that is constant over the beams carries no angle information.
            score = tn > 1e-9 * static_cast<double>(M) ? score / tn : 0.0;
        }
        if (!coherent && centered) score = std::max(score, 0.0);
        sp.scores[g] = score;
    }
    return sp;
}

inline AngleSpectrum angle_spectrum(const Fingerprint& fp, const SidelobeCodebook& codebook, const AngleGrid& grid,
                                    CodebookSide side = CodebookSide::Rx, const SpectrumOptions& opt = {})
{
    if (fp.values.size() != codebook.num_beams())
        throw std::domain_error("angle_spectrum: fingerprint length differs from the codebook's M");
    const std::vector<double> pts = grid.points();
    return angle_spectrum(fp, template_table(codebook, side, pts), pts, opt);
}

struct AoaEstimate {
    std::vector<double> angles_deg; // descending score
    std::vector<double> scores;
    bool fewer_than_requested = false;
};

/// Top-p local maxima outside the LOS window, at least min_separation_deg
/// apart. On a plateau the leftmost point counts; equal scores prefer the
/// smaller angle.
inline AoaEstimate estimate_aoa(const AngleSpectrum& sp, std::size_t p, double min_separation_deg = 5.0)
{
    if (p == 0) throw std::domain_error("estimate_aoa: p must be >= 1");
    const std::size_t G = sp.scores.size();
    if (G == 0 || sp.grid_deg.size() != G) throw std::domain_error("estimate_aoa: malformed spectrum");

    auto allowed = [&](std::size_t g) { return std::abs(sp.grid_deg[g] - sp.los_deg) > sp.exclusion_deg; };
    bool any_allowed = false;
    for (std::size_t g = 0; g < G; ++g) any_allowed = any_allowed || allowed(g);
    if (!any_allowed) throw std::domain_error("estimate_aoa: the LOS exclusion window covers the whole grid");

    std::vector<std::size_t> cand;
    for (std::size_t g = 0; g < G; ++g) {
        if (!allowed(g)) continue;
        const double s = sp.scores[g];
        if (!(s > 0.0)) continue;
        const bool left_ok = g == 0 || s > sp.scores[g - 1];
        const bool right_ok = g + 1 == G || s >= sp.scores[g + 1];
        if (left_ok && right_ok) cand.push_back(g);
    }
    std::stable_sort(cand.begin(), cand.end(),
                     [&](std::size_t a, std::size_t b) { return sp.scores[a] > sp.scores[b]; });

    AoaEstimate est;
    for (std::size_t g : cand) {
        if (est.angles_deg.size() == p) break;
        const double a = sp.grid_deg[g];
        bool far = true;
        for (double prev : est.angles_deg) far = far && std::abs(a - prev) >= min_separation_deg;
        if (!far) continue;
        est.angles_deg.push_back(a);
        est.scores.push_back(sp.scores[g]);
    }
    est.fewer_than_requested = est.angles_deg.size() < p;
    return est;
}

} // namespace csjcs
