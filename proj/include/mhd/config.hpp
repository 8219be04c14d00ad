#ifndef MHD_CONFIG_HPP
#define MHD_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mhd/fields.hpp"
#include "mhd/norms.hpp"

namespace mhd {

// Full run description, parsed from an INI-style file of `key = value` lines
// grouped under [grid], [physics], [noise], [data], [forcing], [solver],
// [output] sections. Unknown sections or keys are rejected.
struct RunConfig {
    GridSpec grid;  // [grid] n, box, dt, horizon; [physics] nu1, nu2

    // [noise]
    int K = 0;  // forcing member count (0 = deterministic run)
    std::uint64_t seed = 1;
    int realizations = 1;

    // [data]
    std::string preset = "taylor-green";  // taylor-green | single-mode | random | zero | file
    double amplitude = 0.1;
    std::string b_preset = "zero";
    double b_amplitude = 0.0;
    std::string u0_file, b0_file;  // used by preset/b_preset = file

    // [forcing]
    std::string forcing = "none";  // none | random
    double forcing_amplitude = 0.0;
    double forcing_sigma = 2.0;
    int forcing_kmax = 2;
    bool shared_forcing = true;  // true: g2 = 0, so G1 = G2 (same Wiener load)

    // [solver]
    double tol = 1e-8;
    int max_iter = 50;
    NormTag norm_tag = NormTag::X2;
    double margin = 0.1;
    std::string gate = "local";  // local (find_local_T0) | global | none
    int constant_samples = 8;    // samples for estimate_bilinear_constant

    // [output]
    std::string out_dir = "out";
    std::vector<double> snapshot_times;  // comma-separated list in the file
    bool write_norms = true;
    bool write_contraction = true;

    void validate() const;  // ConfigError on out-of-range values
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Analytic initial-data presets on the mesh g (all divergence-free,
// mean-zero):
//   taylor-green: A (cos X sin Y sin Z, -sin X cos Y sin Z, 0), X = 2 pi x / L
//   single-mode:  A (0, sin X, cos X)
//   random:       random_solenoidal(g, seed, sigma = 2, kmax = 2, A)
//   zero:         0
SpectralVectorField make_preset(const GridSpec& g, const std::string& name, double amplitude,
                                std::uint64_t seed);

// Materializes the configured initial data and forcing. g2 is zero when
// shared_forcing, giving G1 = G2 after the loading transform.
struct ProblemData {
    SpectralVectorField u0, b0;
    ForcingSequence g1, g2;
};
ProblemData build_problem(const RunConfig& cfg);

}  // namespace mhd

#endif
