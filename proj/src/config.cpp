#include "mhd/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mhd/error.hpp"
#include "mhd/rng.hpp"
#include "mhd/snapshot.hpp"
#include "mhd/transform.hpp"

namespace mhd {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

[[noreturn]] void bad(int line, const std::string& what) {
    throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

double to_double(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) bad(line, "trailing characters in number '" + v + "'");
        return x;
    } catch (const ConfigError&) {
        throw;
    } catch (...) {
        bad(line, "not a number: '" + v + "'");
    }
}

long long to_int(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        long long x = std::stoll(v, &pos);
        if (pos != v.size()) bad(line, "trailing characters in integer '" + v + "'");
        return x;
    } catch (const ConfigError&) {
        throw;
    } catch (...) {
        bad(line, "not an integer: '" + v + "'");
    }
}

std::uint64_t to_u64(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        unsigned long long x = std::stoull(v, &pos);
        if (pos != v.size()) bad(line, "trailing characters in integer '" + v + "'");
        return x;
    } catch (const ConfigError&) {
        throw;
    } catch (...) {
        bad(line, "not an unsigned integer: '" + v + "'");
    }
}

bool to_bool(const std::string& v, int line) {
    const std::string s = lower(v);
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    bad(line, "not a boolean: '" + v + "'");
}

std::vector<double> to_times(const std::string& v, int line) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) bad(line, "empty entry in time list");
        out.push_back(to_double(item, line));
    }
    return out;
}

}  // namespace

void RunConfig::validate() const {
    try {
        grid.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    auto fail = [](const std::string& m) { throw ConfigError("config: " + m); };

    if (K < 0) fail("noise member count must be >= 0");
    if (realizations < 1) fail("realizations must be >= 1");
    if (!(std::isfinite(amplitude) && std::isfinite(b_amplitude))) fail("amplitude not finite");

    auto known_preset = [](const std::string& p) {
        return p == "taylor-green" || p == "single-mode" || p == "random" || p == "zero" ||
               p == "file";
    };
    if (!known_preset(preset)) fail("unknown data preset '" + preset + "'");
    if (!known_preset(b_preset)) fail("unknown magnetic preset '" + b_preset + "'");
    if (preset == "file" && u0_file.empty()) fail("preset=file needs u0_file");
    if (b_preset == "file" && b0_file.empty()) fail("b_preset=file needs b0_file");

    if (forcing != "none" && forcing != "random") fail("forcing must be none or random");
    if (forcing == "random") {
        if (K < 1) fail("random forcing needs noise members >= 1");
        if (forcing_kmax < 1 || 3 * forcing_kmax >= grid.N)
            fail("forcing_kmax out of the dealiased band");
        if (!(forcing_amplitude >= 0.0)) fail("forcing amplitude must be >= 0");
    }

    if (!(tol > 0.0)) fail("tol must be positive");
    if (max_iter < 1) fail("max_iter must be >= 1");
    if (margin < 0.0) fail("margin must be >= 0");
    if (gate != "local" && gate != "global" && gate != "none")
        fail("gate must be local, global, or none");
    if (constant_samples < 1) fail("constant_samples must be >= 1");
    if (out_dir.empty()) fail("output dir must not be empty");
    for (double t : snapshot_times)
        if (!(t >= 0.0 && t <= grid.T + 1e-12)) fail("snapshot time outside [0, T]");
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw, section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string s = trim(raw);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']') bad(line, "unterminated section header");
            section = lower(trim(s.substr(1, s.size() - 2)));
            if (section != "grid" && section != "physics" && section != "noise" &&
                section != "data" && section != "forcing" && section != "solver" &&
                section != "output")
                bad(line, "unknown section [" + section + "]");
            continue;
        }
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos) bad(line, "expected key = value");
        const std::string key = lower(trim(s.substr(0, eq)));
        const std::string val = trim(s.substr(eq + 1));
        if (key.empty()) bad(line, "empty key");
        if (section.empty()) bad(line, "key before any [section]");

        if (section == "grid") {
            if (key == "n") cfg.grid.N = static_cast<int>(to_int(val, line));
            else if (key == "box") cfg.grid.L = to_double(val, line);
            else if (key == "dt") cfg.grid.dt = to_double(val, line);
            else if (key == "horizon") cfg.grid.T = to_double(val, line);
            else bad(line, "unknown key '" + key + "' in [grid]");
        } else if (section == "physics") {
            if (key == "nu1") cfg.grid.nu1 = to_double(val, line);
            else if (key == "nu2") cfg.grid.nu2 = to_double(val, line);
            else bad(line, "unknown key '" + key + "' in [physics]");
        } else if (section == "noise") {
            if (key == "members") cfg.K = static_cast<int>(to_int(val, line));
            else if (key == "seed") cfg.seed = to_u64(val, line);
            else if (key == "realizations") cfg.realizations = static_cast<int>(to_int(val, line));
            else bad(line, "unknown key '" + key + "' in [noise]");
        } else if (section == "data") {
            if (key == "preset") cfg.preset = lower(val);
            else if (key == "amplitude") cfg.amplitude = to_double(val, line);
            else if (key == "b_preset") cfg.b_preset = lower(val);
            else if (key == "b_amplitude") cfg.b_amplitude = to_double(val, line);
            else if (key == "u0_file") cfg.u0_file = val;
            else if (key == "b0_file") cfg.b0_file = val;
            else bad(line, "unknown key '" + key + "' in [data]");
        } else if (section == "forcing") {
            if (key == "kind") cfg.forcing = lower(val);
            else if (key == "amplitude") cfg.forcing_amplitude = to_double(val, line);
            else if (key == "sigma") cfg.forcing_sigma = to_double(val, line);
            else if (key == "kmax") cfg.forcing_kmax = static_cast<int>(to_int(val, line));
            else if (key == "shared") cfg.shared_forcing = to_bool(val, line);
            else bad(line, "unknown key '" + key + "' in [forcing]");
        } else if (section == "solver") {
            if (key == "tol") cfg.tol = to_double(val, line);
            else if (key == "max_iter") cfg.max_iter = static_cast<int>(to_int(val, line));
            else if (key == "norm") {
                const std::string n = lower(val);
                if (n == "x2") cfg.norm_tag = NormTag::X2;
                else if (n == "l5") cfg.norm_tag = NormTag::L5;
                else bad(line, "norm must be x2 or l5");
            } else if (key == "margin") cfg.margin = to_double(val, line);
            else if (key == "gate") cfg.gate = lower(val);
            else if (key == "constant_samples")
                cfg.constant_samples = static_cast<int>(to_int(val, line));
            else bad(line, "unknown key '" + key + "' in [solver]");
        } else {  // output
            if (key == "dir") cfg.out_dir = val;
            else if (key == "snapshots") cfg.snapshot_times = to_times(val, line);
            else if (key == "write_norms") cfg.write_norms = to_bool(val, line);
            else if (key == "write_contraction") cfg.write_contraction = to_bool(val, line);
            else bad(line, "unknown key '" + key + "' in [output]");
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

SpectralVectorField make_preset(const GridSpec& g, const std::string& name, double amplitude,
                                std::uint64_t seed) {
    if (name == "zero") return SpectralVectorField(g);
    if (name == "random") return random_solenoidal(g, seed, 2.0, 2, amplitude);

    const std::size_t count = g.point_count();
    std::array<std::vector<double>, 3> samples;
    for (auto& s : samples) s.assign(count, 0.0);
    const double h = 2.0 * M_PI / g.N;  // phase step per grid index

    if (name == "taylor-green") {
        std::size_t idx = 0;
        for (int i0 = 0; i0 < g.N; ++i0)
            for (int i1 = 0; i1 < g.N; ++i1)
                for (int i2 = 0; i2 < g.N; ++i2, ++idx) {
                    const double X = h * i0, Y = h * i1, Z = h * i2;
                    samples[0][idx] = amplitude * std::cos(X) * std::sin(Y) * std::sin(Z);
                    samples[1][idx] = -amplitude * std::sin(X) * std::cos(Y) * std::sin(Z);
                }
    } else if (name == "single-mode") {
        std::size_t idx = 0;
        for (int i0 = 0; i0 < g.N; ++i0)
            for (int i1 = 0; i1 < g.N; ++i1)
                for (int i2 = 0; i2 < g.N; ++i2, ++idx) {
                    const double X = h * i0;
                    samples[1][idx] = amplitude * std::sin(X);
                    samples[2][idx] = amplitude * std::cos(X);
                }
    } else {
        throw ConfigError("make_preset: unknown preset '" + name + "'");
    }
    return forward_transform(g, samples);
}

ProblemData build_problem(const RunConfig& cfg) {
    const GridSpec& g = cfg.grid;
    ProblemData pd;
    pd.u0 = cfg.preset == "file" ? read_snapshot_field(cfg.u0_file, g)
                                 : make_preset(g, cfg.preset, cfg.amplitude, sub_seed(cfg.seed, 11));
    pd.b0 = cfg.b_preset == "file"
                ? read_snapshot_field(cfg.b0_file, g)
                : make_preset(g, cfg.b_preset, cfg.b_amplitude, sub_seed(cfg.seed, 12));
    if (cfg.forcing == "random" && cfg.K > 0) {
        pd.g1 = random_forcing(g, sub_seed(cfg.seed, 13), static_cast<std::size_t>(cfg.K),
                               cfg.forcing_sigma, cfg.forcing_kmax, cfg.forcing_amplitude);
        if (!cfg.shared_forcing)
            pd.g2 = random_forcing(g, sub_seed(cfg.seed, 14), static_cast<std::size_t>(cfg.K),
                                   cfg.forcing_sigma, cfg.forcing_kmax, cfg.forcing_amplitude);
    }
    return pd;
}

}  // namespace mhd
