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

// JSON configs and summaries, CSV bulk output, run manifests.

#pragma once

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "csjcs/experiments.hpp"

namespace csjcs {

using json = nlohmann::json;

inline constexpr const char* kArtifactVersion = "0.1.0";

/// Schema violation in a config document; `path` names the offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& what)
        : std::runtime_error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

namespace detail {

inline std::string join_path(const std::string& base, const std::string& key)
{
    return base.empty() ? key : base + "." + key;
}

/// Reads an object key by key and rejects anything it was not asked about.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object()) throw ConfigError(path_, "expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    template <typename T>
    T get(const std::string& key, const T& fallback)
    {
        if (!j_.contains(key)) return fallback;
        return required<T>(key);
    }

    template <typename T>
    T required(const std::string& key)
    {
        used_.insert(key);
        if (!j_.contains(key)) throw ConfigError(join_path(path_, key), "missing required key");
        const json& v = j_.at(key);
        try {
            if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t>) {
                if (!v.is_number_unsigned()) throw ConfigError(join_path(path_, key), "expected a non-negative integer");
            } else if constexpr (std::is_same_v<T, double>) {
                if (!v.is_number()) throw ConfigError(join_path(path_, key), "expected a number");
            } else if constexpr (std::is_same_v<T, bool>) {
                if (!v.is_boolean()) throw ConfigError(join_path(path_, key), "expected true or false");
            } else if constexpr (std::is_same_v<T, std::string>) {
                if (!v.is_string()) throw ConfigError(join_path(path_, key), "expected a string");
            }
            return v.get<T>();
        } catch (const json::exception& e) {
            throw ConfigError(join_path(path_, key), e.what());
        }
    }

    const json& sub(const std::string& key)
    {
        used_.insert(key);
        return j_.at(key);
    }

    std::string path(const std::string& key) const { return join_path(path_, key); }

    void finish() const
    {
        for (const auto& [k, v] : j_.items())
            if (!used_.count(k)) throw ConfigError(join_path(path_, k), "unknown key");
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

template <typename F>
auto wrap_domain(const std::string& path, F&& f)
{
    try {
        return f();
    } catch (const std::domain_error& e) {
        throw ConfigError(path, e.what());
    }
}

} // namespace detail

// ---------------------------------------------------------------------------
// Codebook

inline json to_json(const ArrayGeometry& g)
{
    return json{{"n", g.num_elements}, {"spacing_wl", g.spacing_wl}, {"phase_error_rad", g.phase_error_rad}};
}

inline ArrayGeometry geometry_from_json(const json& j, const std::string& path)
{
    detail::ObjectReader r(j, path);
    const auto n = r.required<std::size_t>("n");
    const auto d = r.get<double>("spacing_wl", 0.5);
    const auto pe = r.get<std::vector<double>>("phase_error_rad", {});
    r.finish();
    return detail::wrap_domain(path, [&] { return ArrayGeometry(n, d, pe); });
}

inline json to_json(const SidelobeCodebook& cb)
{
    json subsets = json::array();
    for (const auto& s : cb.subsets) subsets.push_back(s.indices);
    return json{{"geometry", to_json(cb.geometry)},
                {"mainlobe_deg", cb.mainlobe_deg},
                {"subsets", subsets},
                {"seed", cb.seed},
                {"sampled_with_replacement", cb.sampled_with_replacement}};
}

inline SidelobeCodebook codebook_from_json(const json& j, const std::string& path = "")
{
    detail::ObjectReader r(j, path);
    SidelobeCodebook cb;
    cb.geometry = geometry_from_json(r.sub("geometry"), r.path("geometry"));
    cb.mainlobe_deg = r.get<double>("mainlobe_deg", 0.0);
    for (auto& idx : r.required<std::vector<std::vector<std::size_t>>>("subsets"))
        cb.subsets.push_back(AntennaSubset{std::move(idx)});
    cb.seed = r.get<std::uint64_t>("seed", 0);
    cb.sampled_with_replacement = r.get<bool>("sampled_with_replacement", false);
    r.finish();
    detail::wrap_domain(path, [&] {
        cb.validate();
        return 0;
    });
    return cb;
}

// ---------------------------------------------------------------------------
// Scene and channel

inline json to_json(const Scene& s)
{
    json refl = json::array();
    for (const auto& r : s.reflectors)
        refl.push_back({{"pos", {r.position.x, r.position.y}},
                        {"gamma_mag", std::abs(r.reflection_amp)},
                        {"gamma_phase_rad", std::arg(r.reflection_amp)}});
    return json{{"tx_pos", {s.tx_pos.x, s.tx_pos.y}},
                {"rx_pos", {s.rx_pos.x, s.rx_pos.y}},
                {"boresights_deg", {s.tx_boresight_deg, s.rx_boresight_deg}},
                {"reflectors", refl},
                {"wavelength_m", s.wavelength_m}};
}

namespace detail {

inline Vec2 vec2_from(ObjectReader& r, const std::string& key)
{
    const auto v = r.required<std::vector<double>>(key);
    if (v.size() != 2) throw ConfigError(r.path(key), "expected [x, y]");
    return {v[0], v[1]};
}

} // namespace detail

inline Scene scene_from_json(const json& j, const std::string& path = "")
{
    detail::ObjectReader r(j, path);
    Scene s;
    s.tx_pos = detail::vec2_from(r, "tx_pos");
    s.rx_pos = detail::vec2_from(r, "rx_pos");
    const auto b = r.get<std::vector<double>>("boresights_deg", {180.0, 0.0});
    if (b.size() != 2) throw ConfigError(r.path("boresights_deg"), "expected [tx, rx]");
    s.tx_boresight_deg = b[0];
    s.rx_boresight_deg = b[1];
    if (r.has("reflectors")) {
        const json& arr = r.sub("reflectors");
        if (!arr.is_array()) throw ConfigError(r.path("reflectors"), "expected an array");
        for (std::size_t k = 0; k < arr.size(); ++k) {
            detail::ObjectReader rr(arr[k], r.path("reflectors") + "[" + std::to_string(k) + "]");
            Reflector ref;
            ref.position = detail::vec2_from(rr, "pos");
            ref.reflection_amp = std::polar(rr.get<double>("gamma_mag", 0.5), rr.get<double>("gamma_phase_rad", 0.0));
            rr.finish();
            s.reflectors.push_back(ref);
        }
    }
    s.wavelength_m = r.get<double>("wavelength_m", kSpeedOfLight / 60e9);
    r.finish();
    return s;
}

inline json to_json(const Channel& ch)
{
    json paths = json::array();
    ch.for_each_path([&](const PathComponent& p) {
        paths.push_back(
            {{"aoa_deg", p.aoa_deg}, {"aod_deg", p.aod_deg}, {"amp_re", p.amp.real()}, {"amp_im", p.amp.imag()}});
    });
    return json{{"paths", paths}};
}

/// First path is the LOS.
inline Channel channel_from_json(const json& j, const std::string& path = "")
{
    detail::ObjectReader r(j, path);
    const json& arr = r.sub("paths");
    if (!arr.is_array() || arr.empty()) throw ConfigError(r.path("paths"), "expected a non-empty array, LOS first");
    Channel ch;
    for (std::size_t k = 0; k < arr.size(); ++k) {
        detail::ObjectReader pr(arr[k], r.path("paths") + "[" + std::to_string(k) + "]");
        PathComponent p;
        p.aoa_deg = pr.required<double>("aoa_deg");
        p.aod_deg = pr.required<double>("aod_deg");
        p.amp = {pr.required<double>("amp_re"), pr.get<double>("amp_im", 0.0)};
        pr.finish();
        if (k == 0)
            ch.los = p;
        else
            ch.nlos.push_back(p);
    }
    r.finish();
    detail::wrap_domain(path, [&] {
        ch.validate();
        return 0;
    });
    return ch;
}

// ---------------------------------------------------------------------------
// Experiment config

inline json to_json(const ExperimentConfig& c)
{
    json noise{{"mode", c.noise.mode == NoiseSpec::Mode::Sigma ? "sigma" : "snr"},
               {"sigma", c.noise.sigma},
               {"snr_db", c.noise.snr_db},
               {"reference", c.noise.reference == NoiseSpec::Reference::Link ? "link" : "element"}};
    const char* mode = c.scene.mode == SceneSpec::Mode::Random   ? "random"
                       : c.scene.mode == SceneSpec::Mode::Pinned ? "pinned"
                                                                 : "paths";
    json scene{{"mode", mode},
               {"los_distance_m", c.scene.los_distance_m},
               {"num_reflectors", c.scene.num_reflectors},
               {"gamma_mag", c.scene.gamma_mag},
               {"fov_deg", c.scene.fov_deg},
               {"path_factor_min", c.scene.path_factor_min},
               {"path_factor_max", c.scene.path_factor_max},
               {"min_reflector_separation_deg", c.scene.min_reflector_separation_deg},
               {"wavelength_m", c.scene.wavelength_m},
               {"mirror", c.scene.mirror}};
    if (c.scene.mode == SceneSpec::Mode::Pinned) scene["layout"] = to_json(c.scene.layout);
    if (c.scene.mode == SceneSpec::Mode::Paths) scene["paths"] = to_json(c.scene.paths)["paths"];
    json j{{"n_tx", c.n_tx},
           {"n_rx", c.n_rx},
           {"L", c.L},
           {"M", c.M},
           {"N", c.N},
           {"spacing_wl", c.spacing_wl},
           {"scheme", to_string(c.scheme)},
           {"noise", noise},
           {"scene", scene},
           {"estimator",
            {{"variant", to_string(c.variant)},
             {"normalization", to_string(c.norm)},
             {"exclusion_deg", c.exclusion_deg},
             {"min_separation_deg", c.min_separation_deg},
             {"num_peaks", c.num_peaks},
             {"fold_mirror", c.fold_mirror}}},
           {"grid", {{"min_deg", c.grid.min_deg}, {"max_deg", c.grid.max_deg}, {"step_deg", c.grid.step_deg}}},
           {"detection",
            {{"preamble_len", c.preamble_len},
             {"genie_symbols", c.genie_symbols},
             {"beam_phase_std_rad", c.beam_phase_std_rad},
             {"compare_full_array", c.compare_full_array}}},
           {"trials", c.trials},
           {"seed", c.seed},
           {"side", to_string(c.side)},
           {"threads", c.threads},
           {"M_list", c.M_list},
           {"N_list", c.N_list},
           {"off_list", c.off_list},
           {"sizes", c.sizes},
           {"n_tx_list", c.n_tx_list},
           {"snr_list_db", c.snr_list_db},
           {"target_error_deg", c.target_error_deg},
           {"side_mirrored", c.side_mirrored}};
    return j;
}

namespace detail {

template <typename E, typename Parse>
E parse_enum(ObjectReader& r, const std::string& key, E fallback, Parse parse)
{
    if (!r.has(key)) return fallback;
    const auto s = r.required<std::string>(key);
    try {
        return parse(s);
    } catch (const std::domain_error& e) {
        throw ConfigError(r.path(key), e.what());
    }
}

} // namespace detail

/// Every key is optional and defaults to the ExperimentConfig member
/// initializers; unknown keys are rejected.
inline ExperimentConfig config_from_json(const json& j)
{
    ExperimentConfig c;
    detail::ObjectReader r(j, "");
    c.n_tx = r.get("n_tx", c.n_tx);
    c.n_rx = r.get("n_rx", c.n_rx);
    c.L = r.get("L", c.L);
    c.M = r.get("M", c.M);
    c.N = r.get("N", c.N);
    c.spacing_wl = r.get("spacing_wl", c.spacing_wl);
    c.scheme = detail::parse_enum(r, "scheme", c.scheme, parse_modulation);

    if (r.has("noise")) {
        detail::ObjectReader n(r.sub("noise"), "noise");
        c.noise.mode = detail::parse_enum(n, "mode", c.noise.mode, [](const std::string& s) {
            if (s == "sigma") return NoiseSpec::Mode::Sigma;
            if (s == "snr") return NoiseSpec::Mode::Snr;
            throw std::domain_error("expected 'sigma' or 'snr'");
        });
        c.noise.sigma = n.get("sigma", c.noise.sigma);
        c.noise.snr_db = n.get("snr_db", c.noise.snr_db);
        c.noise.reference = detail::parse_enum(n, "reference", c.noise.reference, [](const std::string& s) {
            if (s == "link") return NoiseSpec::Reference::Link;
            if (s == "element") return NoiseSpec::Reference::Element;
            throw std::domain_error("expected 'link' or 'element'");
        });
        n.finish();
    }

    if (r.has("scene")) {
        detail::ObjectReader s(r.sub("scene"), "scene");
        auto& sc = c.scene;
        sc.mode = detail::parse_enum(s, "mode", sc.mode, [](const std::string& v) {
            if (v == "random") return SceneSpec::Mode::Random;
            if (v == "pinned") return SceneSpec::Mode::Pinned;
            if (v == "paths") return SceneSpec::Mode::Paths;
            throw std::domain_error("expected 'random', 'pinned' or 'paths'");
        });
        sc.los_distance_m = s.get("los_distance_m", sc.los_distance_m);
        sc.num_reflectors = s.get("num_reflectors", sc.num_reflectors);
        sc.gamma_mag = s.get("gamma_mag", sc.gamma_mag);
        sc.fov_deg = s.get("fov_deg", sc.fov_deg);
        sc.path_factor_min = s.get("path_factor_min", sc.path_factor_min);
        sc.path_factor_max = s.get("path_factor_max", sc.path_factor_max);
        sc.min_reflector_separation_deg = s.get("min_reflector_separation_deg", sc.min_reflector_separation_deg);
        sc.wavelength_m = s.get("wavelength_m", sc.wavelength_m);
        sc.mirror = s.get("mirror", sc.mirror);
        if (s.has("layout")) sc.layout = scene_from_json(s.sub("layout"), "scene.layout");
        if (s.has("paths")) sc.paths = channel_from_json(json{{"paths", s.sub("paths")}}, "scene");
        if (sc.mode == SceneSpec::Mode::Pinned && !s.has("layout"))
            throw ConfigError("scene.layout", "missing required key for mode 'pinned'");
        if (sc.mode == SceneSpec::Mode::Paths && !s.has("paths"))
            throw ConfigError("scene.paths", "missing required key for mode 'paths'");
        s.finish();
    }

    if (r.has("estimator")) {
        detail::ObjectReader e(r.sub("estimator"), "estimator");
        c.variant = detail::parse_enum(e, "variant", c.variant, parse_variant);
        c.norm = detail::parse_enum(e, "normalization", c.norm, parse_spectrum_norm);
        c.exclusion_deg = e.get("exclusion_deg", c.exclusion_deg);
        c.min_separation_deg = e.get("min_separation_deg", c.min_separation_deg);
        c.num_peaks = e.get("num_peaks", c.num_peaks);
        c.fold_mirror = e.get("fold_mirror", c.fold_mirror);
        e.finish();
    }

    if (r.has("grid")) {
        detail::ObjectReader g(r.sub("grid"), "grid");
        c.grid.min_deg = g.get("min_deg", c.grid.min_deg);
        c.grid.max_deg = g.get("max_deg", c.grid.max_deg);
        c.grid.step_deg = g.get("step_deg", c.grid.step_deg);
        g.finish();
    }

    if (r.has("detection")) {
        detail::ObjectReader d(r.sub("detection"), "detection");
        c.preamble_len = d.get("preamble_len", c.preamble_len);
        c.genie_symbols = d.get("genie_symbols", c.genie_symbols);
        c.beam_phase_std_rad = d.get("beam_phase_std_rad", c.beam_phase_std_rad);
        c.compare_full_array = d.get("compare_full_array", c.compare_full_array);
        d.finish();
    }

    c.trials = r.get("trials", c.trials);
    c.seed = r.get("seed", c.seed);
    c.side = detail::parse_enum(r, "side", c.side, [](const std::string& s) {
        if (s == "rx_codebook") return CodebookSide::Rx;
        if (s == "tx_codebook") return CodebookSide::Tx;
        throw std::domain_error("expected 'rx_codebook' or 'tx_codebook'");
    });
    c.threads = r.get("threads", c.threads);
    c.M_list = r.get("M_list", c.M_list);
    c.N_list = r.get("N_list", c.N_list);
    c.off_list = r.get("off_list", c.off_list);
    c.sizes = r.get("sizes", c.sizes);
    c.n_tx_list = r.get("n_tx_list", c.n_tx_list);
    c.snr_list_db = r.get("snr_list_db", c.snr_list_db);
    c.target_error_deg = r.get("target_error_deg", c.target_error_deg);
    c.side_mirrored = r.get("side_mirrored", c.side_mirrored);
    r.finish();

    try {
        c.validate();
    } catch (const std::domain_error& e) {
        std::string msg = e.what();
        const std::string prefix = "config: ";
        if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
        throw ConfigError("", msg);
    }
    return c;
}

inline json read_json_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string(), "cannot open file");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string(), e.what());
    }
}

inline ExperimentConfig load_config(const std::filesystem::path& path) { return config_from_json(read_json_file(path)); }

/// Applies "a.b.c=value" to a JSON document. The value is parsed as JSON and
/// taken as a plain string when that fails.
inline void apply_override(json& doc, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError(assignment, "expected key=value");
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw;
    }
    json* node = &doc;
    std::size_t start = 0;
    for (;;) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw ConfigError(key, "empty path component");
        if (!node->is_object()) throw ConfigError(key, "cannot descend into a non-object");
        if (dot == std::string::npos) {
            (*node)[part] = value;
            return;
        }
        node = &(*node)[part];
        if (node->is_null()) *node = json::object();
        start = dot + 1;
    }
}

/// 64-bit FNV-1a over the canonical (sorted-key) JSON dump, as 16 hex digits.
inline std::string config_hash(const json& j)
{
    const std::string s = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

/// The thread count does not change results, so it is left out of the hash.
inline std::string config_hash(ExperimentConfig c)
{
    c.threads = 0;
    return config_hash(to_json(c));
}

// ---------------------------------------------------------------------------
// Files

/// Writes to a sibling temp file, then renames over the target.
inline void atomic_write(const std::filesystem::path& path, const std::string& content)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

/// --out if given, else $CSJCS_OUT, else ./results.
inline std::filesystem::path resolve_output_root(const std::string& cli_out)
{
    if (!cli_out.empty()) return cli_out;
    if (const char* env = std::getenv("CSJCS_OUT"); env && *env) return env;
    return "results";
}

inline std::string fmt_double(double v)
{
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string join_angles(const std::vector<double>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + fmt_double(v[i]);
    return s;
}

inline std::vector<double> split_angles(const std::string& s)
{
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ';'))
        if (!item.empty()) out.push_back(std::stod(item));
    return out;
}

inline std::string pattern_csv(const SidelobeCodebook& cb, const std::vector<double>& grid)
{
    const CMatrix R = array_factor_table(cb, grid);
    const double L = static_cast<double>(cb.subset_size());
    std::string out = "beam_index,angle_deg,abs_r,gain_db\n";
    for (std::size_t m = 0; m < R.rows(); ++m)
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const double a = std::abs(R(m, g));
            out += std::to_string(m) + "," + fmt_double(grid[g]) + "," + fmt_double(a) + "," +
                   fmt_double(20.0 * std::log10(std::max(a, 1e-300) / L)) + "\n";
        }
    return out;
}

inline std::string spectrum_csv(const AngleSpectrum& sp)
{
    std::string out = "angle_deg,score\n";
    for (std::size_t g = 0; g < sp.grid_deg.size(); ++g)
        out += fmt_double(sp.grid_deg[g]) + "," + fmt_double(sp.scores[g]) + "\n";
    return out;
}

inline std::string fingerprint_csv(const Fingerprint& fp)
{
    std::string out = "beam_index,F_value_re,F_value_im,variant\n";
    for (std::size_t m = 0; m < fp.values.size(); ++m)
        out += std::to_string(m) + "," + fmt_double(fp.values[m].real()) + "," + fmt_double(fp.values[m].imag()) +
               "," + to_string(fp.variant) + "\n";
    return out;
}

inline const char* kTrialsHeader = "trial,true_angles,est_angles,abs_error_deg,ber,ber_full,rx_power,warning";

inline std::string trials_csv(const std::vector<TrialRecord>& records)
{
    std::string out = std::string(kTrialsHeader) + "\n";
    for (const auto& r : records)
        out += std::to_string(r.trial) + "," + join_angles(r.true_angles) + "," + join_angles(r.est_angles) + "," +
               fmt_double(r.abs_error_deg) + "," + fmt_double(r.ber) + "," + fmt_double(r.ber_full) + "," +
               fmt_double(r.rx_power) + "," + (r.warning ? "1" : "0") + "\n";
    return out;
}

inline std::vector<TrialRecord> parse_trials_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kTrialsHeader)
        throw std::runtime_error("trials CSV: header does not match the column contract");
    std::vector<TrialRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        if (!line.empty() && line.back() == ',') f.emplace_back();
        if (f.size() != 8) throw std::runtime_error("trials CSV: expected 8 columns in '" + line + "'");
        TrialRecord r;
        r.trial = std::stoul(f[0]);
        r.true_angles = split_angles(f[1]);
        r.est_angles = split_angles(f[2]);
        r.abs_error_deg = std::stod(f[3]);
        r.ber = std::stod(f[4]);
        r.ber_full = f[5] == "nan" ? std::numeric_limits<double>::quiet_NaN() : std::stod(f[5]);
        r.rx_power = std::stod(f[6]);
        r.warning = f[7] == "1";
        out.push_back(r);
    }
    return out;
}

inline json to_json(const Aggregates& a)
{
    auto num = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
    return json{{"mean_error", a.mean_error},       {"std_error", a.std_error},
                {"p90_error", a.p90_error},         {"mean_ber", a.mean_ber},
                {"mean_ber_full", num(a.mean_ber_full)}, {"mean_rx_power", a.mean_rx_power},
                {"warnings", a.warnings},           {"count", a.count}};
}

inline json summary_json(const ExperimentResult& r)
{
    return json{{"artifact_version", kArtifactVersion},
                {"config_hash", config_hash(r.config)},
                {"config", to_json(r.config)},
                {"aggregates", to_json(r.aggregates)}};
}

/// Re-reads a result directory and checks that the stored aggregates match a
/// recomputation from the trial records.
inline ExperimentResult load_result(const std::filesystem::path& dir)
{
    const json summary = read_json_file(dir / "summary.json");
    std::ifstream in(dir / "trials.csv");
    if (!in) throw std::runtime_error("missing " + (dir / "trials.csv").string());
    std::stringstream buf;
    buf << in.rdbuf();

    ExperimentResult r;
    r.config = config_from_json(summary.at("config"));
    r.records = parse_trials_csv(buf.str());
    r.aggregates = compute_aggregates(r.records);
    if (to_json(r.aggregates) != summary.at("aggregates"))
        throw std::runtime_error("result " + dir.string() + ": stored aggregates differ from the trial records");
    if (config_hash(r.config) != summary.at("config_hash").get<std::string>())
        throw std::runtime_error("result " + dir.string() + ": config hash mismatch");
    return r;
}

// ---------------------------------------------------------------------------
// Manifests

inline std::string utc_timestamp()
{
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// A run directory's manifest. It is written as "incomplete" before any
/// result and flipped to "complete" at the end, so a crashed run is visible.
class RunManifest {
public:
    RunManifest(std::filesystem::path root, std::string command, const json& config, std::uint64_t seed)
        : root_(std::move(root))
    {
        doc_ = json{{"artifact_version", kArtifactVersion},
                    {"command", std::move(command)},
                    {"config_hash", config_hash(config)},
                    {"config", config},
                    {"seed", seed},
                    {"started_at", utc_timestamp()},
                    {"status", "incomplete"},
                    {"outputs", json::array()}};
        dir_ = root_ / ("run-" + doc_["config_hash"].get<std::string>());
        save();
        register_run();
    }

    const std::filesystem::path& dir() const { return dir_; }

    void add_output(const std::filesystem::path& p, const std::string& content)
    {
        atomic_write(p, content);
        doc_["outputs"].push_back(std::filesystem::relative(p, root_).generic_string());
        save();
    }

    void set(const std::string& key, json value)
    {
        doc_[key] = std::move(value);
        save();
    }

    void complete()
    {
        doc_["status"] = "complete";
        doc_["finished_at"] = utc_timestamp();
        save();
        register_run();
    }

private:
    void save() const { atomic_write(dir_ / "manifest.json", doc_.dump(2) + "\n"); }

    /// Keeps <root>/manifest.json listing every run by directory.
    void register_run() const
    {
        const auto top = root_ / "manifest.json";
        json index{{"artifact_version", kArtifactVersion}, {"runs", json::array()}};
        if (std::filesystem::exists(top)) {
            try {
                index = read_json_file(top);
            } catch (const ConfigError&) {
            }
        }
        const std::string rel = std::filesystem::relative(dir_, root_).generic_string();
        json entry{{"dir", rel},
                   {"command", doc_["command"]},
                   {"config_hash", doc_["config_hash"]},
                   {"status", doc_["status"]}};
        bool found = false;
        for (auto& e : index["runs"])
            if (e.value("dir", "") == rel) {
                e = entry;
                found = true;
            }
        if (!found) index["runs"].push_back(entry);
        atomic_write(top, index.dump(2) + "\n");
    }

    std::filesystem::path root_;
    std::filesystem::path dir_;
    json doc_;
};

/// Writes summary.json and trials.csv for one experiment under
/// <run dir>/<config hash>/.
inline std::filesystem::path write_result(RunManifest& manifest, const ExperimentResult& r)
{
    const auto dir = manifest.dir() / config_hash(r.config);
    manifest.add_output(dir / "trials.csv", trials_csv(r.records));
    manifest.add_output(dir / "summary.json", summary_json(r).dump(2) + "\n");
    return dir;
}

} // namespace csjcs
