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

// Sparse multipath channel: one LOS path plus K specular NLOS paths, the
// 2-D scene geometry that produces them, and the narrowband link
//
//     y[n,m] = conj(w_r[m])^T H w_t[m] s[n,m] + z[n,m],
//     H      = sum_k amp_k b(aoa_k) conj(a(aod_k))^T.

#pragma once

#include <string>
#include <vector>

#include "csjcs/array_model.hpp"
#include "csjcs/random.hpp"
#include "csjcs/types.hpp"

namespace csjcs {

struct PathComponent {
    double aoa_deg = 0.0; // at RX, from RX broadside
    double aod_deg = 0.0; // at TX, from TX broadside
    cd amp{0.0, 0.0};

    bool operator==(const PathComponent&) const = default;
};

struct Channel {
    PathComponent los;
    std::vector<PathComponent> nlos;

    std::size_t num_nlos() const { return nlos.size(); }

    template <typename F>
    void for_each_path(F&& f) const
    {
        f(los);
        for (const auto& p : nlos) f(p);
    }

    void validate() const
    {
        if (!(std::abs(los.amp) > 0.0)) throw std::domain_error("Channel: LOS amplitude must be nonzero");
        for_each_path([](const PathComponent& p) {
            check_angle(p.aoa_deg, "Channel path AoA");
            check_angle(p.aod_deg, "Channel path AoD");
        });
    }

    bool operator==(const Channel&) const = default;
};

struct LinkGeometry {
    ArrayGeometry tx{1};
    ArrayGeometry rx{16};

    bool operator==(const LinkGeometry&) const = default;
};

enum class CodebookSide { Rx, Tx };

inline const char* to_string(CodebookSide s) { return s == CodebookSide::Rx ? "rx_codebook" : "tx_codebook"; }

// ---------------------------------------------------------------------------
// Scene geometry

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    bool operator==(const Vec2&) const = default;
};

struct Reflector {
    Vec2 position;
    cd reflection_amp{0.5, 0.0}; // |Gamma| e^{j psi}

    bool operator==(const Reflector&) const = default;
};

struct Scene {
    Vec2 tx_pos{2.0, 0.0};
    Vec2 rx_pos{0.0, 0.0};
    double tx_boresight_deg = 180.0; // direction the TX broadside faces, world frame
    double rx_boresight_deg = 0.0;
    std::vector<Reflector> reflectors;
    double wavelength_m = kSpeedOfLight / 60e9;

    bool operator==(const Scene&) const = default;
};

inline double wrap_deg(double a)
{
    a = std::fmod(a + 180.0, 360.0);
    if (a <= 0.0) a += 360.0;
    return a - 180.0;
}

/// Angle of `target` seen from `origin`, relative to the broadside direction.
inline double angle_from_boresight(const Vec2& origin, double boresight_deg, const Vec2& target)
{
    const Vec2 d = target - origin;
    return wrap_deg(rad2deg(std::atan2(d.y, d.x)) - boresight_deg);
}

/// Free-space LOS amplitude lambda / (4 pi d) with zero phase; each NLOS path
/// carries Gamma * lambda / (4 pi (d1 + d2)) and the phase of its excess path
/// length over the LOS path.
inline Channel scene_to_channel(const Scene& scene)
{
    if (!(scene.wavelength_m > 0.0)) throw std::domain_error("Scene: wavelength must be > 0");
    const double d_los = (scene.tx_pos - scene.rx_pos).norm();
    if (!(d_los > 0.0)) throw std::domain_error("Scene: tx_pos and rx_pos coincide");

    const double lambda = scene.wavelength_m;
    Channel ch;
    ch.los.aoa_deg = angle_from_boresight(scene.rx_pos, scene.rx_boresight_deg, scene.tx_pos);
    ch.los.aod_deg = angle_from_boresight(scene.tx_pos, scene.tx_boresight_deg, scene.rx_pos);
    if (std::abs(ch.los.aoa_deg) > 90.0 || std::abs(ch.los.aod_deg) > 90.0)
        throw std::domain_error("Scene: TX and RX are not inside each other's field of view");
    ch.los.amp = {lambda / (4.0 * kPi * d_los), 0.0};

    for (std::size_t k = 0; k < scene.reflectors.size(); ++k) {
        const Reflector& r = scene.reflectors[k];
        const double d1 = (r.position - scene.tx_pos).norm();
        const double d2 = (scene.rx_pos - r.position).norm();
        if (!(d1 > 0.0) || !(d2 > 0.0))
            throw std::domain_error("Scene: reflector " + std::to_string(k) + " coincides with an endpoint");
        PathComponent p;
        p.aoa_deg = angle_from_boresight(scene.rx_pos, scene.rx_boresight_deg, r.position);
        p.aod_deg = angle_from_boresight(scene.tx_pos, scene.tx_boresight_deg, r.position);
        if (std::abs(p.aoa_deg) > 90.0 || std::abs(p.aod_deg) > 90.0)
            throw std::domain_error("Scene: reflector " + std::to_string(k) +
                                    " is outside the field of view of the TX or RX array");
        const double path = d1 + d2;
        p.amp = r.reflection_amp * (lambda / (4.0 * kPi * path)) *
                std::polar(1.0, -2.0 * kPi * (path - d_los) / lambda);
        ch.nlos.push_back(p);
    }
    return ch;
}

/// Swap the TX and RX roles and reflect the geometry across the TX-RX line,
/// so the node that used to transmit now receives and every angle flips sign.
inline Channel mirror_roles(const Channel& ch)
{
    auto flip = [](const PathComponent& p) { return PathComponent{-p.aod_deg, -p.aoa_deg, p.amp}; };
    Channel out;
    out.los = flip(ch.los);
    for (const auto& p : ch.nlos) out.nlos.push_back(flip(p));
    return out;
}

inline Scene mirror_roles(const Scene& scene)
{
    const Vec2 axis_vec = scene.tx_pos - scene.rx_pos;
    const double len = axis_vec.norm();
    if (!(len > 0.0)) throw std::domain_error("Scene: tx_pos and rx_pos coincide");
    const Vec2 u = axis_vec * (1.0 / len);
    const double axis_deg = rad2deg(std::atan2(u.y, u.x));
    auto reflect = [&](const Vec2& p) {
        const Vec2 rel = p - scene.rx_pos;
        return scene.rx_pos + u * (2.0 * rel.dot(u)) - rel;
    };
    Scene out = scene;
    out.tx_pos = scene.rx_pos;
    out.rx_pos = scene.tx_pos;
    out.tx_boresight_deg = wrap_deg(2.0 * axis_deg - scene.rx_boresight_deg);
    out.rx_boresight_deg = wrap_deg(2.0 * axis_deg - scene.tx_boresight_deg);
    for (auto& r : out.reflectors) r.position = reflect(r.position);
    return out;
}

// ---------------------------------------------------------------------------
// Link

/// conj(w_r)^T H w_t without forming H.
inline cd effective_gain(const Channel& channel, const LinkGeometry& link, const CVector& w_t, const CVector& w_r)
{
    if (w_t.size() != link.tx.num_elements) throw std::domain_error("effective_gain: w_t length mismatch");
    if (w_r.size() != link.rx.num_elements) throw std::domain_error("effective_gain: w_r length mismatch");
    cd g{0.0, 0.0};
    channel.for_each_path([&](const PathComponent& p) {
        const cd rx = inner(w_r, steering_vector(link.rx, p.aoa_deg));
        const cd tx = std::conj(inner(w_t, steering_vector(link.tx, p.aod_deg)));
        g += p.amp * rx * tx;
    });
    return g;
}

/// Per-beam effective gain g[m] with the codebook on `side` and a fixed beam
/// on the other end.
inline CVector beam_gains(const Channel& channel, const LinkGeometry& link, const CVector& fixed_weights,
                          const SidelobeCodebook& codebook, CodebookSide side)
{
    const ArrayGeometry& cb_geom = side == CodebookSide::Rx ? link.rx : link.tx;
    const ArrayGeometry& fixed_geom = side == CodebookSide::Rx ? link.tx : link.rx;
    if (codebook.geometry.num_elements != cb_geom.num_elements)
        throw std::domain_error("beam_gains: codebook size does not match the codebook-side array");
    if (fixed_weights.size() != fixed_geom.num_elements)
        throw std::domain_error("beam_gains: fixed beam length does not match the fixed-side array");

    // Fixed-side response per path; codebook-side response via the codebook weights.
    std::vector<cd> fixed_resp;
    std::vector<CVector> cb_steer;
    std::vector<cd> amps;
    channel.for_each_path([&](const PathComponent& p) {
        amps.push_back(p.amp);
        if (side == CodebookSide::Rx) {
            fixed_resp.push_back(std::conj(inner(fixed_weights, steering_vector(link.tx, p.aod_deg))));
            cb_steer.push_back(steering_vector(link.rx, p.aoa_deg));
        } else {
            fixed_resp.push_back(inner(fixed_weights, steering_vector(link.rx, p.aoa_deg)));
            cb_steer.push_back(steering_vector(link.tx, p.aod_deg));
        }
    });

    CVector g(codebook.num_beams());
    for (std::size_t m = 0; m < g.size(); ++m) {
        const CVector w = make_weight_vector(codebook, m);
        cd acc{0.0, 0.0};
        for (std::size_t k = 0; k < amps.size(); ++k) {
            cd cb = inner(w, cb_steer[k]);
            if (side == CodebookSide::Tx) cb = std::conj(cb);
            acc += amps[k] * cb * fixed_resp[k];
        }
        g[m] = acc;
    }
    return g;
}

} // namespace csjcs
