// Acceptance runner: one line per criterion, exit 0 iff all pass.
// Criteria are checked with pinned tolerances and wall-clock budgets; any
// exception inside a criterion fails that criterion and keeps the run going.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mhd/config.hpp"
#include "mhd/csv.hpp"
#include "mhd/ensemble.hpp"
#include "mhd/error.hpp"
#include "mhd/fields.hpp"
#include "mhd/noise.hpp"
#include "mhd/norms.hpp"
#include "mhd/operators.hpp"
#include "mhd/rng.hpp"
#include "mhd/solver.hpp"
#include "mhd/verify.hpp"

using namespace mhd;

namespace {

constexpr std::uint64_t kSeed = 20260814ull;

double g_worst_div = 0.0;
void track_div(double d) { g_worst_div = std::max(g_worst_div, d); }

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// headline for a suite: the check closest to (or past) its bound
std::string worst_of(const std::vector<CheckResult>& checks) {
    const CheckResult* worst = nullptr;
    double score = -1.0;
    for (const auto& c : checks) {
        const double s = c.bound > 0.0 ? c.measured / c.bound : (c.pass ? 0.0 : 2.0);
        if (s > score) {
            score = s;
            worst = &c;
        }
    }
    if (!worst) return "no checks";
    return worst->name + " " + fmt(worst->measured) + " (bound " + fmt(worst->bound) + ")";
}

Outcome from_suite(const std::vector<CheckResult>& checks) {
    return {all_pass(checks), worst_of(checks)};
}

double pair_norm(const FieldHistory& a, const FieldHistory& b, NormTag tag) {
    return working_norm(a, tag) + working_norm(b, tag);
}

// ---- criterion 6 helper: one gated contraction run at a given step --------

struct ContractionProbe {
    ContractionReport report;
    double solution_norm = 0.0;
    double mild_sum = 0.0;
    bool diffs_decreasing = true;
};

ContractionProbe contraction_run(NormTag tag, double dt, double c_hat,
                                 const SpectralVectorField& v0_unit,
                                 const SpectralVectorField& w0_unit, double scale) {
    GridSpec g = v0_unit.grid;
    g.dt = dt;
    const std::size_t M = g.steps();
    SpectralVectorField v0 = v0_unit, w0 = w0_unit;
    v0.grid = g;
    w0.grid = g;
    v0 *= scale;
    w0 *= scale;
    ForcingSequence none;
    auto noise = sample_increments(sub_seed(kSeed, 600), M, 1, g.dt);
    auto [v1, w1] = linear_part(v0, w0, none, none, noise);
    auto [st, rep] = picard_solve(v1, w1, tag, 1e-9, 80, c_hat);

    ContractionProbe probe;
    probe.report = rep;
    probe.solution_norm = pair_norm(st.v_hist, st.w_hist, tag);
    auto [mv, mw] = mild_residual(st.v_hist, st.w_hist, v1, w1);
    probe.mild_sum = mv + mw;
    for (std::size_t i = 1; i + 1 < st.diffs.size(); ++i)
        probe.diffs_decreasing &= st.diffs[i] < st.diffs[i - 1];
    track_div(divergence_rel(st.v_hist));
    track_div(divergence_rel(st.w_hist));
    return probe;
}

Outcome criterion6_path(NormTag tag) {
    GridSpec g;
    g.N = 16;
    g.dt = 1.0 / 64.0;
    g.T = 0.5;
    const double c_hat = estimate_bilinear_constant(g, 8, sub_seed(kSeed, 61), tag);
    if (!(c_hat > 0.0) || !std::isfinite(c_hat)) return {false, "bilinear estimate not finite"};

    auto v0 = random_solenoidal(g, sub_seed(kSeed, 62), 2.0, 4);
    auto w0 = random_solenoidal(g, sub_seed(kSeed, 63), 2.0, 4);
    ForcingSequence none;
    auto noise = sample_increments(sub_seed(kSeed, 600), g.steps(), 1, g.dt);
    auto [v1u, w1u] = linear_part(v0, w0, none, none, noise);
    const double eps_unit = pair_norm(v1u, w1u, tag);
    const double scale = 0.9 / (4.0 * c_hat * eps_unit);  // gate product lands at 0.9

    auto coarse = contraction_run(tag, g.dt, c_hat, v0, w0, scale);
    auto fine = contraction_run(tag, g.dt / 2.0, c_hat, v0, w0, scale);

    const double richardson = coarse.mild_sum / fine.mild_sum;
    const bool pass = coarse.report.converged && coarse.report.product <= 0.9 + 1e-9 &&
                      coarse.report.ratio_max <= 0.9 && coarse.diffs_decreasing &&
                      coarse.solution_norm <= 2.0 * coarse.report.epsilon &&
                      fine.report.converged && richardson >= 3.3 && richardson <= 4.8;
    return {pass, "ratio " + fmt(coarse.report.ratio_max) + ", ball " +
                      fmt(coarse.solution_norm / coarse.report.epsilon) +
                      " eps, residual drop x" + fmt(richardson)};
}

// ---- criterion 7: local window machinery -----------------------------------

Outcome criterion7() {
    GridSpec g;
    g.N = 16;
    g.dt = 1.0 / 256.0;
    g.T = 1.0;
    // slow dissipation spreads the L^4-in-time mass over the horizon, so the
    // window norm scales like (T'/T)^{1/4} and halving has real leverage; the
    // fine mesh gives the search a 4 dt floor at T/64
    g.nu1 = g.nu2 = 0.02;
    const std::size_t M = g.steps();
    const double c_hat = estimate_bilinear_constant(g, 6, sub_seed(kSeed, 71), NormTag::X2);
    const double threshold = 1.0 / (4.0 * c_hat * 1.1);

    // Taylor-Green velocity with a transverse magnetic component
    auto u0 = make_preset(g, "taylor-green", 1.0, 0);
    auto b0 = make_preset(g, "single-mode", 0.4, 0);
    auto [v0u, w0u] = elsasser_from_physical(u0, b0);

    // forcing small next to the gate, data deliberately non-small
    auto g1 = random_forcing(g, sub_seed(kSeed, 72), 2, 2.0, 2, 0.0);
    ForcingSequence g2;
    for (std::size_t k = 0; k < 2; ++k) g2.members.emplace_back(g);
    {
        // size the loading so its own contribution stays below 0.1 threshold
        auto probe = random_forcing(g, sub_seed(kSeed, 72), 2, 2.0, 2, 1.0);
        auto [G1p, G2p] = forcing_from_physical(probe, g2);
        auto noise = sample_increments(sub_seed(kSeed, 73), M, 2, g.dt);
        SpectralVectorField zero(g);
        auto [zv, zw] = linear_part(zero, zero, G1p, G2p, noise);
        const double znorm = pair_norm(zv, zw, NormTag::X2);
        g1 = random_forcing(g, sub_seed(kSeed, 72), 2, 2.0, 2,
                            znorm > 0.0 ? 0.1 * threshold / znorm : 0.0);
    }
    auto [G1, G2] = forcing_from_physical(g1, g2);
    auto noise = sample_increments(sub_seed(kSeed, 73), M, 2, g.dt);

    // calibrate data so the full horizon fails the gate
    auto scale_data = [&](double a) {
        SpectralVectorField v0 = v0u, w0 = w0u;
        v0 *= a;
        w0 *= a;
        return std::make_pair(v0, w0);
    };
    double unit = 0.0;
    {
        auto [v0, w0] = scale_data(1.0);
        ForcingSequence none;
        auto [v1, w1] = linear_part(v0, w0, none, none, noise);
        unit = pair_norm(v1, w1, NormTag::X2);
    }
    // 1.15x the gate at the full horizon: fails there, clears a shorter
    // window, and even the doubled data stays solvable above the 4 dt floor
    // (2.3 x 0.36 < 1)
    const double amp = 1.15 * threshold / unit;

    auto [v0, w0] = scale_data(amp);
    const double t0 = find_local_T0(v0, w0, G1, G2, noise, c_hat, NormTag::X2);
    if (!(t0 < g.T)) return {false, "window search did not shrink the horizon"};
    if (t0 < 4.0 * g.dt - 1e-15) return {false, "window below the 4 dt floor"};

    // the returned window really is solvable
    const auto m = static_cast<std::size_t>(std::llround(t0 / g.dt));
    auto [v1, w1] = linear_part(v0, w0, G1, G2, noise.prefix(m));
    auto [st, rep] = picard_solve(v1, w1, NormTag::X2, 1e-6, 300, c_hat);
    track_div(divergence_rel(st.v_hist));
    track_div(divergence_rel(st.w_hist));
    if (!rep.converged) return {false, "Picard did not converge on the returned window"};

    // doubling the data cannot lengthen the window
    auto [v0d, w0d] = scale_data(2.0 * amp);
    const double t0d = find_local_T0(v0d, w0d, G1, G2, noise, c_hat, NormTag::X2);
    const bool mono = t0d <= t0;
    return {mono, "T0 " + fmt(t0) + " -> " + fmt(t0d) + " after doubling, " +
                      std::to_string(rep.iterations) + " iterations"};
}

// ---- criterion 8: Navier-Stokes reduction ----------------------------------

Outcome criterion8() {
    GridSpec g;
    g.N = 16;
    g.dt = 1.0 / 64.0;
    g.T = 0.25;
    const std::size_t M = g.steps();
    auto u0 = make_preset(g, "taylor-green", 0.05, 0);
    SpectralVectorField b0(g);
    auto [v0, w0] = elsasser_from_physical(u0, b0);

    auto g1 = random_forcing(g, sub_seed(kSeed, 81), 2, 2.0, 2, 0.02);
    ForcingSequence g2;
    for (std::size_t k = 0; k < 2; ++k) g2.members.emplace_back(g);
    auto [G1, G2] = forcing_from_physical(g1, g2);  // shared loading: G1 = G2

    auto noise = sample_increments(sub_seed(kSeed, 82), M, 2, g.dt);
    auto [v1, w1] = linear_part(v0, w0, G1, G2, noise);
    auto [st, rep] = picard_solve(v1, w1, NormTag::X2, 1e-10, 60);
    if (!rep.converged) return {false, "Picard did not converge"};

    double u_mag = 0.0, b_mag = 0.0;
    for (std::size_t n = 0; n <= M; ++n) {
        auto [u, b] = physical_from_elsasser(st.v_hist.states[n], st.w_hist.states[n]);
        u_mag = std::max(u_mag, max_abs(u));
        b_mag = std::max(b_mag, max_abs(b));
        track_div(divergence_rel(u));
        track_div(divergence_rel(b));
    }
    const double rel = u_mag > 0.0 ? b_mag / u_mag : b_mag;
    return {rel <= 1e-12, "relative magnetic residue " + fmt(rel)};
}

// ---- criterion 10: byte determinism across thread counts -------------------

std::map<std::string, std::string> dir_bytes(const std::filesystem::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : std::filesystem::recursive_directory_iterator(dir))
        if (e.is_regular_file())
            out[std::filesystem::relative(e.path(), dir).string()] =
                read_text_file(e.path().string());
    return out;
}

Outcome criterion10() {
    namespace fs = std::filesystem;
    const fs::path root = fs::temp_directory_path() / "mhd_acceptance_c10";
    fs::remove_all(root);

    RunConfig cfg;
    cfg.grid.N = 8;
    cfg.grid.dt = 1.0 / 32.0;
    cfg.grid.T = 0.25;
    cfg.K = 2;
    cfg.seed = kSeed;
    cfg.realizations = 3;
    cfg.preset = "taylor-green";
    cfg.amplitude = 0.05;
    cfg.forcing = "random";
    cfg.forcing_amplitude = 0.02;
    cfg.gate = "none";
    cfg.snapshot_times = {0.25};

    int codes[3];
    const int threads[3] = {1, 2, 1};
    for (int i = 0; i < 3; ++i) {
        RunConfig c = cfg;
        c.out_dir = (root / ("run" + std::to_string(i))).string();
        auto out = run_ensemble(c, threads[i]);
        codes[i] = out.exit_code;
        for (const auto& r : out.results) track_div(r.div_rel);
    }
    if (codes[0] != 0 || codes[1] != 0 || codes[2] != 0) {
        fs::remove_all(root);
        return {false, "ensemble exit codes " + std::to_string(codes[0]) + "/" +
                           std::to_string(codes[1]) + "/" + std::to_string(codes[2])};
    }
    const auto a = dir_bytes(root / "run0");
    const auto b = dir_bytes(root / "run1");
    const auto c = dir_bytes(root / "run2");
    const bool same = a == b && a == c && !a.empty();
    const std::size_t files = a.size();
    fs::remove_all(root);
    return {same, std::to_string(files) + " artifacts, threads {1,2} and rerun byte-identical: " +
                      (same ? "yes" : "no")};
}

}  // namespace

int main() {
    struct Row {
        int id;
        std::string label;
        double budget_s;
        Outcome (*run)();
    };

    const Row rows[] = {
        {1, "semigroup smoothing", 10.0,
         [] {
             double div = 0.0;
             auto checks = verify_semigroup(kSeed, &div);
             track_div(div);
             return from_suite(checks);
         }},
        {2, "interpolation inequality", 30.0,
         [] {
             double div = 0.0;
             auto checks = verify_interpolation(kSeed, &div);
             track_div(div);
             return from_suite(checks);
         }},
        {3, "bilinear boundedness", 300.0,
         [] {
             double div = 0.0;
             auto checks = verify_bilinear(kSeed, &div);
             track_div(div);
             return from_suite(checks);
         }},
        {4, "Oseen kernel scaling/decay/closed form", 120.0,
         [] { return from_suite(verify_kernel()); }},
        {5, "stochastic convolution law", 120.0,
         [] {
             double div = 0.0;
             auto checks = verify_noise(kSeed, &div);
             track_div(div);
             return from_suite(checks);
         }},
        {6, "contraction and ball invariance", 600.0,
         [] {
             auto t0 = std::chrono::steady_clock::now();
             auto x2 = criterion6_path(NormTag::X2);
             const double s_x2 = seconds_since(t0);
             t0 = std::chrono::steady_clock::now();
             auto l5 = criterion6_path(NormTag::L5);
             const double s_l5 = seconds_since(t0);
             const bool in_budget = s_x2 < 300.0 && s_l5 < 300.0;  // 5 min per path
             return Outcome{x2.pass && l5.pass && in_budget,
                            "X2 [" + x2.detail + ", " + fmt(s_x2) + " s]; L5 [" + l5.detail +
                                ", " + fmt(s_l5) + " s]"};
         }},
        {7, "local existence window", 300.0, criterion7},
        {8, "Navier-Stokes reduction", 60.0, criterion8},
        {9, "divergence-free structure", 1e9,
         [] {
             return Outcome{g_worst_div <= 1e-10,
                            "worst relative divergence " + fmt(g_worst_div) + " (bound 1e-10)"};
         }},
        {10, "byte determinism across threads", 300.0, criterion10},
    };

    int failures = 0;
    for (const auto& row : rows) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = row.run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double sec = seconds_since(t0);
        const bool in_budget = sec < row.budget_s;
        const bool pass = out.pass && in_budget;
        failures += pass ? 0 : 1;
        std::printf("[%s] criterion %2d: %s - %s [%.1f s%s]\n", pass ? "PASS" : "FAIL", row.id,
                    row.label.c_str(), out.detail.c_str(), sec,
                    in_budget ? "" : ", over budget");
        std::fflush(stdout);
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
