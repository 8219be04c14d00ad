// Batch front end: simulate / verify / ensemble / kernel-table.
//
// Exit codes: 0 success, 1 internal error or failed verification,
// 2 configuration problem (bad file, flags, or unknown suite),
// 3 no admissible solve window (or refused global gate),
// 4 Picard non-convergence, 5 ensemble with failed members.

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mhd/csv.hpp"
#include "mhd/ensemble.hpp"
#include "mhd/error.hpp"
#include "mhd/oseen.hpp"
#include "mhd/verify.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int realizations = 0;
    int threads = 1;
};

// precedence: --out flag > MHD_OUT environment > config value
void apply_overrides(mhd::RunConfig& cfg, const CommonFlags& f) {
    if (f.seed_set) cfg.seed = f.seed;
    if (f.realizations > 0) cfg.realizations = f.realizations;
    if (!f.out_dir.empty()) {
        cfg.out_dir = f.out_dir;
    } else if (const char* env = std::getenv("MHD_OUT"); env && *env) {
        cfg.out_dir = env;
    }
    cfg.validate();
}

int do_run(const CommonFlags& f, bool ensemble) {
    mhd::RunConfig cfg = mhd::parse_config_file(f.config_path);
    apply_overrides(cfg, f);
    const mhd::RunOutcome out = ensemble ? mhd::run_ensemble(cfg, f.threads)
                                         : mhd::run_simulate(cfg, f.threads);
    std::cout << out.summary;
    std::cout << (out.exit_code == 0 ? "ok" : "failed") << " (exit " << out.exit_code << "), "
              << "artifacts in " << cfg.out_dir << "\n";
    return out.exit_code;
}

int do_verify(const CommonFlags& f, const std::string& suite) {
    std::uint64_t seed = 20260814ull;
    if (!f.config_path.empty()) seed = mhd::parse_config_file(f.config_path).seed;
    if (f.seed_set) seed = f.seed;

    double div = 0.0;
    const auto checks = mhd::verify_suite(suite, seed, &div);
    std::cout << mhd::format_checks(checks);
    std::cout << "max relative divergence across evolved fields: " << mhd::fmt_g17(div) << "\n";

    if (!f.out_dir.empty()) {
        std::filesystem::create_directories(f.out_dir);
        std::string csv = mhd::csv_row({"name", "measured", "bound", "pass", "detail"});
        for (const auto& c : checks)
            csv += mhd::csv_row({c.name, mhd::fmt_g17(c.measured), mhd::fmt_g17(c.bound),
                                 c.pass ? "1" : "0", c.detail});
        mhd::write_text_file(f.out_dir + "/verify_" + suite + ".csv", csv);
    }
    return mhd::all_pass(checks) ? 0 : 1;
}

int do_kernel_table(const std::string& out_dir) {
    const double inv_sqrt3 = 0.57735026918962576;
    std::string csv = mhd::csv_row(
        {"t", "x_norm", "component", "value", "scaling_residual", "decay_product"});
    for (double t : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        for (int i = 0; i < 13; ++i) {
            const double r = 0.1 * std::pow(10.0, i / 6.0);  // 0.1 .. 10, geometric
            const std::array<double, 3> x{r * inv_sqrt3, r * inv_sqrt3, r * inv_sqrt3};
            const double rt = std::sqrt(t);
            const std::array<double, 3> xs{x[0] / rt, x[1] / rt, x[2] / rt};
            const auto val = mhd::kernel_summed(t, x);
            const auto prof = mhd::kernel_summed(1.0, xs);
            double prof_mag = 0.0;
            for (double c : prof) prof_mag += c * c;
            prof_mag = std::sqrt(prof_mag);
            const double rs = r / rt;
            const double decay = std::pow(1.0 + rs, 4.0) * prof_mag;
            for (int j = 0; j < 3; ++j) {
                const double resid = std::abs(val[j] - prof[j] / (t * t));
                csv += mhd::csv_row({mhd::fmt_g17(t), mhd::fmt_g17(r), std::to_string(j),
                                     mhd::fmt_g17(val[j]), mhd::fmt_g17(resid),
                                     mhd::fmt_g17(decay)});
            }
        }
    }
    const std::string dir = out_dir.empty() ? std::string(".") : out_dir;
    std::filesystem::create_directories(dir);
    mhd::write_text_file(dir + "/kernel_table.csv", csv);
    std::cout << "wrote " << dir << "/kernel_table.csv\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pseudospectral mild-solution toolbox for stochastic MHD on a periodic box"};
    app.require_subcommand(1);

    CommonFlags f;
    std::string suite = "all";

    auto add_common = [&](CLI::App* cmd, bool need_config) {
        auto* copt = cmd->add_option("--config", f.config_path, "INI config file");
        if (need_config) copt->required();
        cmd->add_option("--seed", f.seed, "override master seed")
            ->each([&](const std::string&) { f.seed_set = true; });
        cmd->add_option("--out", f.out_dir, "output directory (beats MHD_OUT and config)");
        cmd->add_option("--realizations", f.realizations, "override realization count");
        cmd->add_option("--threads", f.threads, "worker threads for realizations");
    };

    auto* sim = app.add_subcommand("simulate", "solve the configured problem pathwise");
    add_common(sim, true);
    auto* ens = app.add_subcommand("ensemble", "parallel realizations + aggregate statistics");
    add_common(ens, true);
    auto* ver = app.add_subcommand("verify", "run a property suite");
    add_common(ver, false);
    ver->add_option("--suite", suite, "semigroup|interpolation|bilinear|kernel|noise|all");
    auto* ker = app.add_subcommand("kernel-table", "emit the kernel scaling/decay table");
    ker->add_option("--out", f.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sim->parsed()) return do_run(f, false);
        if (ens->parsed()) return do_run(f, true);
        if (ver->parsed()) return do_verify(f, suite);
        return do_kernel_table(f.out_dir);
    } catch (const mhd::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const mhd::UnsupportedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const mhd::NoLocalWindowError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
