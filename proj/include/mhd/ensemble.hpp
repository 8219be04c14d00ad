#ifndef MHD_ENSEMBLE_HPP
#define MHD_ENSEMBLE_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mhd/config.hpp"
#include "mhd/solver.hpp"

namespace mhd {

// One pathwise solve. fail_code: 0 ok, 3 no admissible window, 4 Picard
// non-convergence, 1 unexpected error (message in `error`).
struct RealizationResult {
    int index = 0;
    std::uint64_t seed = 0;
    int fail_code = 0;
    std::string error;
    double T0 = 0.0;
    ContractionReport report;
    double sup_v_h12_sq = 0.0, sup_w_h12_sq = 0.0;  // sup_t ||.||^2_{H^{1/2}}
    double l5_v = 0.0, l5_w = 0.0;                  // pathwise space-time L5
    double mild_v = 0.0, mild_w = 0.0;              // refined-rule residuals
    double fp_v = 0.0, fp_w = 0.0;                  // own-rule residuals
    double div_rel = 0.0;                           // worst relative divergence
    std::string norms_u_csv, norms_b_csv, diffs_csv;
    std::vector<std::pair<std::string, SpectralVectorField>> snapshots;
};

struct RunOutcome {
    int exit_code = 0;
    double c_hat = 0.0;
    std::vector<RealizationResult> results;
    std::string summary;  // human-readable account, one line per event
};

// Per-realization pipeline: build data/loads, sample the noise path, gate
// (find_local_T0 / global smallness / none), solve by Picard iteration,
// measure residuals, emit artifacts under cfg.out_dir. Realizations are
// independent (seed split by index) and may run on `threads` workers; all
// files are written by the calling thread in index order, so artifacts are
// byte-identical for any thread count.
RunOutcome run_simulate(const RunConfig& cfg, int threads = 1);

// run_simulate plus aggregate Monte Carlo statistics (ensemble.csv); any
// failed member downgrades to exit 5 and yields failures.csv. Needs
// realizations >= 2.
RunOutcome run_ensemble(const RunConfig& cfg, int threads = 1);

}  // namespace mhd

#endif
