#include "mhd/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <thread>

#include "mhd/csv.hpp"
#include "mhd/error.hpp"
#include "mhd/noise.hpp"
#include "mhd/rng.hpp"
#include "mhd/snapshot.hpp"

namespace mhd {

namespace {

// realization seeds live above 2^32 so they can never collide with the
// small fixed indices used for data/forcing generation
std::uint64_t realization_seed(std::uint64_t master, int index) {
    return sub_seed(master, (1ull << 32) + static_cast<std::uint64_t>(index));
}

std::string rtag(int index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "r%03d", index);
    return buf;
}

struct Loads {
    ForcingSequence G1, G2;
};

Loads build_loads(const RunConfig& cfg, const ProblemData& pd) {
    Loads loads;
    if (pd.g1.empty()) return loads;
    ForcingSequence g2 = pd.g2;
    if (g2.empty()) {  // shared load: g2 = 0, hence G1 = G2 = P g1
        for (std::size_t k = 0; k < pd.g1.K(); ++k)
            g2.members.emplace_back(cfg.grid);
    }
    auto [G1, G2] = forcing_from_physical(pd.g1, g2);
    loads.G1 = std::move(G1);
    loads.G2 = std::move(G2);
    return loads;
}

RealizationResult solve_one(const RunConfig& cfg, const SpectralVectorField& v0,
                            const SpectralVectorField& w0, const Loads& loads, double c_hat,
                            int index) {
    RealizationResult rr;
    rr.index = index;
    rr.seed = realization_seed(cfg.seed, index);
    const GridSpec& g = cfg.grid;
    const std::size_t M = g.steps();
    const std::size_t K = loads.G1.K();

    // K = 0 is a legal noise-free run; the realization still carries a mesh
    // so the deterministic linear part can check dt consistency
    NoiseRealization noise;
    if (K > 0) {
        noise = sample_increments(rr.seed, M, K, g.dt);
    } else {
        noise.seed = rr.seed;
        noise.dt = g.dt;
        noise.M = M;
    }

    std::size_t m_window = M;
    if (cfg.gate == "local") {
        const double T0 =
            find_local_T0(v0, w0, loads.G1, loads.G2, noise, c_hat, cfg.norm_tag, cfg.margin);
        m_window = static_cast<std::size_t>(std::llround(T0 / g.dt));
        rr.T0 = T0;
    } else {
        rr.T0 = g.T;
    }

    NoiseRealization window = noise.prefix(m_window);
    auto [v1, w1] = linear_part(v0, w0, loads.G1, loads.G2, window);
    auto [st, rep] =
        picard_solve(v1, w1, cfg.norm_tag, cfg.tol, cfg.max_iter, c_hat);
    rr.report = rep;
    if (!rep.converged) rr.fail_code = 4;

    if (m_window >= 3) {
        auto [mv, mw] = mild_residual(st.v_hist, st.w_hist, v1, w1);
        rr.mild_v = mv;
        rr.mild_w = mw;
    }
    auto [fv, fw] = fixed_point_residual(st.v_hist, st.w_hist, v1, w1);
    rr.fp_v = fv;
    rr.fp_w = fw;

    rr.div_rel = std::max(divergence_rel(st.v_hist), divergence_rel(st.w_hist));

    NormReport rv = spacetime_norms(st.v_hist);
    NormReport rw = spacetime_norms(st.w_hist);
    rr.sup_v_h12_sq = rv.sup_H12 * rv.sup_H12;
    rr.sup_w_h12_sq = rw.sup_H12 * rw.sup_H12;
    rr.l5_v = rv.l5_spacetime;
    rr.l5_w = rw.l5_spacetime;

    // physical variables for the emitted traces
    FieldHistory uh(g, m_window), bh(g, m_window);
    for (std::size_t nn = 0; nn < uh.states.size(); ++nn) {
        auto [u, b] = physical_from_elsasser(st.v_hist.states[nn], st.w_hist.states[nn]);
        uh.states[nn] = std::move(u);
        bh.states[nn] = std::move(b);
    }
    rr.div_rel = std::max({rr.div_rel, divergence_rel(uh), divergence_rel(bh)});
    if (cfg.write_norms) {
        rr.norms_u_csv = norm_report_csv(spacetime_norms(uh));
        rr.norms_b_csv = norm_report_csv(spacetime_norms(bh));
    }

    {
        std::string csv = csv_row({"iteration", "diff"});
        for (std::size_t i = 0; i < st.diffs.size(); ++i)
            csv += csv_row({std::to_string(i + 1), fmt_g17(st.diffs[i])});
        rr.diffs_csv = std::move(csv);
    }

    for (double t : cfg.snapshot_times) {
        const auto nn = static_cast<std::size_t>(std::llround(t / g.dt));
        if (nn > m_window) continue;  // outside the solved window
        rr.snapshots.emplace_back("u_" + rtag(index) + "_n" + std::to_string(nn) + ".snap",
                                  uh.states[nn]);
        rr.snapshots.emplace_back("b_" + rtag(index) + "_n" + std::to_string(nn) + ".snap",
                                  bh.states[nn]);
    }
    return rr;
}

void run_realizations(const RunConfig& cfg, const SpectralVectorField& v0,
                      const SpectralVectorField& w0, const Loads& loads, double c_hat,
                      int threads, std::vector<RealizationResult>& results) {
    const int R = cfg.realizations;
    results.resize(static_cast<std::size_t>(R));
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= R) return;
            try {
                results[i] = solve_one(cfg, v0, w0, loads, c_hat, i);
            } catch (const NoLocalWindowError& e) {
                results[i].index = i;
                results[i].seed = realization_seed(cfg.seed, i);
                results[i].fail_code = 3;
                results[i].error = e.what();
            } catch (const std::exception& e) {
                results[i].index = i;
                results[i].seed = realization_seed(cfg.seed, i);
                results[i].fail_code = 1;
                results[i].error = e.what();
            }
        }
    };
    const int nw = std::max(1, std::min(threads, R));
    if (nw == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nw));
        for (int t = 0; t < nw; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
}

const std::vector<std::string> kRunHeader = {
    "index",     "seed",      "status",        "error",   "T0",        "epsilon",
    "c_hat",     "product",   "iterations",    "final_residual", "ratio_max",
    "sup_v_h12_sq", "sup_w_h12_sq", "l5_v",    "l5_w",    "mild_v",    "mild_w",
    "fp_v",      "fp_w",      "divergence_rel"};

std::vector<std::string> run_row(const RealizationResult& r) {
    return {std::to_string(r.index),
            std::to_string(r.seed),
            r.fail_code == 0 ? "converged" : "failed",
            r.error,
            fmt_g17(r.T0),
            fmt_g17(r.report.epsilon),
            fmt_g17(r.report.c_estimate),
            fmt_g17(r.report.product),
            std::to_string(r.report.iterations),
            fmt_g17(r.report.final_residual),
            fmt_g17(r.report.ratio_max),
            fmt_g17(r.sup_v_h12_sq),
            fmt_g17(r.sup_w_h12_sq),
            fmt_g17(r.l5_v),
            fmt_g17(r.l5_w),
            fmt_g17(r.mild_v),
            fmt_g17(r.mild_w),
            fmt_g17(r.fp_v),
            fmt_g17(r.fp_w),
            fmt_g17(r.div_rel)};
}

// single-writer emission in index order: byte-identical for any thread count
void write_artifacts(const RunConfig& cfg, const RunOutcome& out) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    const std::string base = cfg.out_dir + "/";

    std::string run_csv = csv_row(kRunHeader);
    for (const auto& r : out.results) run_csv += csv_row(run_row(r));
    write_text_file(base + "run.csv", run_csv);

    for (const auto& r : out.results) {
        if (r.fail_code == 3 || r.fail_code == 1) continue;
        const std::string tag = rtag(r.index);
        if (cfg.write_norms) {
            write_text_file(base + "norms_u_" + tag + ".csv", r.norms_u_csv);
            write_text_file(base + "norms_b_" + tag + ".csv", r.norms_b_csv);
        }
        if (cfg.write_contraction) {
            std::string c = csv_row({"epsilon", "c_hat", "product", "converged", "iterations",
                                     "final_residual", "ratio_max"});
            c += csv_row({fmt_g17(r.report.epsilon), fmt_g17(r.report.c_estimate),
                          fmt_g17(r.report.product), r.report.converged ? "1" : "0",
                          std::to_string(r.report.iterations),
                          fmt_g17(r.report.final_residual), fmt_g17(r.report.ratio_max)});
            write_text_file(base + "contraction_" + tag + ".csv", c);
            write_text_file(base + "diffs_" + tag + ".csv", r.diffs_csv);
        }
        for (const auto& [name, field] : r.snapshots) write_snapshot(base + name, field);
    }
}

int aggregate_exit(const std::vector<RealizationResult>& results) {
    bool any3 = false, any4 = false, any1 = false;
    for (const auto& r : results) {
        any3 |= r.fail_code == 3;
        any4 |= r.fail_code == 4;
        any1 |= r.fail_code == 1;
    }
    if (any3) return 3;
    if (any4) return 4;
    if (any1) return 1;
    return 0;
}

RunOutcome run_common(const RunConfig& cfg, int threads, bool ensemble) {
    cfg.validate();
    if (ensemble && cfg.realizations < 2)
        throw ConfigError("ensemble needs realizations >= 2");

    RunOutcome out;
    std::ostringstream log;

    ProblemData pd = build_problem(cfg);
    SpectralVectorField u0 = leray_project(pd.u0);
    SpectralVectorField b0 = leray_project(pd.b0);
    auto [v0, w0] = elsasser_from_physical(u0, b0);
    Loads loads = build_loads(cfg, pd);

    out.c_hat = cfg.gate == "none"
                    ? 0.0
                    : estimate_bilinear_constant(cfg.grid, cfg.constant_samples,
                                                 sub_seed(cfg.seed, 21), cfg.norm_tag);
    log << "bilinear constant estimate: " << fmt_g17(out.c_hat) << '\n';

    if (cfg.gate == "global") {
        ContractionReport gate =
            check_global_smallness(v0, w0, loads.G1, loads.G2, out.c_hat, cfg.norm_tag);
        namespace fs = std::filesystem;
        fs::create_directories(cfg.out_dir);
        std::string gcsv = csv_row({"epsilon_apriori", "c_hat", "product", "pass"});
        gcsv += csv_row({fmt_g17(gate.epsilon), fmt_g17(gate.c_estimate),
                         fmt_g17(gate.product), gate.converged ? "1" : "0"});
        write_text_file(cfg.out_dir + "/gate.csv", gcsv);
        log << "global gate: product = " << fmt_g17(gate.product)
            << (gate.converged ? " (pass)" : " (refused)") << '\n';
        if (!gate.converged) {
            out.exit_code = 3;
            out.summary = log.str();
            return out;
        }
    }

    run_realizations(cfg, v0, w0, loads, out.c_hat, threads, out.results);
    write_artifacts(cfg, out);

    for (const auto& r : out.results) {
        log << rtag(r.index) << ": "
            << (r.fail_code == 0 ? "converged in " + std::to_string(r.report.iterations) +
                                       " iterations"
                                 : "failed (" + (r.error.empty() ? "non-convergence" : r.error) +
                                       ")")
            << ", T0 = " << fmt_g17(r.T0) << '\n';
    }
    out.exit_code = aggregate_exit(out.results);
    out.summary = log.str();
    return out;
}

}  // namespace

RunOutcome run_simulate(const RunConfig& cfg, int threads) {
    return run_common(cfg, threads, false);
}

RunOutcome run_ensemble(const RunConfig& cfg, int threads) {
    RunOutcome out = run_common(cfg, threads, true);
    if (out.results.empty()) return out;  // gate refusal

    std::vector<double> sup_v, sup_w, l5v, l5w;
    std::string failures = csv_row({"index", "seed", "error"});
    int failed = 0;
    for (const auto& r : out.results) {
        if (r.fail_code == 0) {
            sup_v.push_back(std::sqrt(r.sup_v_h12_sq));
            sup_w.push_back(std::sqrt(r.sup_w_h12_sq));
            l5v.push_back(r.l5_v);
            l5w.push_back(r.l5_w);
        } else {
            ++failed;
            failures += csv_row({std::to_string(r.index), std::to_string(r.seed),
                                 r.error.empty() ? "non-convergence" : r.error});
        }
    }

    std::string csv = csv_row({"quantity", "value", "stderr"});
    csv += csv_row({"realizations", std::to_string(out.results.size()), "0"});
    csv += csv_row({"converged", std::to_string(out.results.size() - failed), "0"});
    if (sup_v.size() >= 2) {
        const MonteCarloNorm ev = expectation_norm(sup_v, 2.0);
        const MonteCarloNorm ew = expectation_norm(sup_w, 2.0);
        const MonteCarloNorm lv = expectation_norm(l5v, 5.0);
        const MonteCarloNorm lw = expectation_norm(l5w, 5.0);
        csv += csv_row({"e_sup_v_h12_l2", fmt_g17(ev.value), fmt_g17(ev.stderr_)});
        csv += csv_row({"e_sup_w_h12_l2", fmt_g17(ew.value), fmt_g17(ew.stderr_)});
        csv += csv_row({"l5_v_expectation", fmt_g17(lv.value), fmt_g17(lv.stderr_)});
        csv += csv_row({"l5_w_expectation", fmt_g17(lw.value), fmt_g17(lw.stderr_)});
    }
    write_text_file(cfg.out_dir + "/ensemble.csv", csv);

    if (failed > 0) {
        write_text_file(cfg.out_dir + "/failures.csv", failures);
        out.exit_code = 5;
        out.summary += "ensemble: " + std::to_string(failed) + " member(s) failed\n";
    }
    return out;
}

}  // namespace mhd
