#include "mhd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>

#include "mhd/csv.hpp"
#include "mhd/error.hpp"
#include "mhd/fields.hpp"
#include "mhd/noise.hpp"
#include "mhd/norms.hpp"
#include "mhd/operators.hpp"
#include "mhd/oseen.hpp"
#include "mhd/quadrature.hpp"
#include "mhd/rng.hpp"
#include "mhd/solver.hpp"
#include "mhd/transform.hpp"

namespace mhd {

namespace {

void track(double* acc, double d) {
    if (acc) *acc = std::max(*acc, d);
}

}  // namespace

CheckResult make_check(const std::string& name, double measured, double bound,
                       const std::string& detail) {
    CheckResult r;
    r.name = name;
    r.measured = measured;
    r.bound = bound;
    r.pass = std::isfinite(measured) && measured <= bound;
    r.detail = detail;
    return r;
}

/*---------------------------------------------------------------- semigroup */

std::vector<CheckResult> verify_semigroup(std::uint64_t seed, double* div_out) {
    GridSpec g;
    g.N = 32;
    g.nu1 = 1.0;
    const double nu = g.nu1;
    const double t_star = 1.5;  // quadrature carries [0, t_star]; per-mode tail beyond

    double worst_dev = 0.0, worst_comp = 0.0, worst_contract = 0.0, worst_spot = 0.0;
    for (int i = 0; i < 20; ++i) {
        SpectralVectorField u = random_solenoidal(g, sub_seed(seed, 100 + i), 2.0, 8);
        const double denom = sobolev_norm(u, 0.5, 2.0);

        // collapse the trajectory norm onto the occupied |k|^2 shells:
        // ||S(t)u||^2_{H3/2} = sum_shells W e^{-2 nu lam t}
        const double cell = g.L * g.L * g.L;
        std::vector<std::pair<double, double>> shells;  // (lam, W)
        {
            std::map<long long, double> acc;
            for_each_mode(g, [&](std::size_t idx, int k0, int k1, int k2) {
                const long long kk = 1LL * k0 * k0 + 1LL * k1 * k1 + 1LL * k2 * k2;
                if (kk == 0) return;
                double p = 0.0;
                for (int d = 0; d < 3; ++d) p += std::norm(u.c[d][idx]);
                if (p > 0.0) acc[kk] += p;
            });
            const double unit = std::pow(2.0 * M_PI / g.L, 2.0);
            for (const auto& [kk, p] : acc) {
                const double lam = unit * static_cast<double>(kk);
                shells.emplace_back(lam, cell * std::pow(lam, 1.5) * p);
            }
        }
        auto traj = [&](double t) {
            double s = 0.0;
            for (const auto& [lam, w] : shells) s += w * std::exp(-2.0 * nu * lam * t);
            return s;
        };
        // the reduction must agree with the operator route before it is used
        for (double t : {0.05, 0.4, 1.0}) {
            const double via_op = sobolev_norm(heat_propagate(t, nu, u), 1.5, 2.0);
            worst_spot =
                std::max(worst_spot, std::abs(traj(t) - via_op * via_op) / (via_op * via_op));
        }

        const double head = integrate(traj, 0.0, t_star, 1e-10);
        double tail = 0.0;
        for (const auto& [lam, w] : shells)
            tail += w * std::exp(-2.0 * nu * t_star * lam) / (2.0 * nu * lam);

        const double ratio = (head + tail) / (denom * denom);
        worst_dev = std::max(worst_dev, std::abs(ratio - 0.5) / 0.5);

        // semigroup composition and H^{1/2} contractivity on the same field
        SpectralVectorField ab = heat_propagate(0.3, nu, heat_propagate(0.4, nu, u));
        SpectralVectorField c = heat_propagate(0.7, nu, u);
        worst_comp = std::max(worst_comp, max_abs_diff(ab, c) / std::max(max_abs(c), 1e-300));
        for (double t : {0.1, 0.5, 1.0}) {
            SpectralVectorField st = heat_propagate(t, nu, u);
            worst_contract =
                std::max(worst_contract, sobolev_norm(st, 0.5, 2.0) / denom - 1.0);
            track(div_out, divergence_rel(st));
        }
        track(div_out, divergence_rel(u));
    }

    std::vector<CheckResult> out;
    out.push_back(make_check("semigroup.smoothing_ratio_dev", worst_dev, 1e-4,
                             "max rel deviation of smoothing integral from 0.5, 20 fields"));
    out.push_back(make_check("semigroup.shell_reduction_spot", worst_spot, 1e-12,
                             "shell form of ||S(t)u||^2_{H3/2} vs operator route"));
    out.push_back(make_check("semigroup.composition", worst_comp, 1e-13,
                             "S(0.3)S(0.4) vs S(0.7), coefficient sup"));
    out.push_back(make_check("semigroup.h12_contractive", worst_contract, 1e-13,
                             "max growth of the H^{1/2} norm under the flow"));
    return out;
}

/*------------------------------------------------------------ interpolation */

namespace {

SpectralVectorField single_mode_field(const GridSpec& g, int k0, int k1, int k2) {
    SpectralVectorField f(g);
    // any vector orthogonal to k keeps it solenoidal
    double a0 = static_cast<double>(k1) - k2, a1 = static_cast<double>(k2) - k0,
           a2 = static_cast<double>(k0) - k1;
    if (a0 == 0.0 && a1 == 0.0 && a2 == 0.0) {
        a0 = static_cast<double>(k1);
        a1 = -static_cast<double>(k0);
        a2 = 0.0;
    }
    const auto wrap = [&](int k) { return k >= 0 ? k : k + g.N; };
    const std::size_t ip = flat_index(g, wrap(k0), wrap(k1), wrap(k2));
    const std::size_t im = flat_index(g, wrap(-k0), wrap(-k1), wrap(-k2));
    const cplx z(0.4 * a0, 0.7 * a0), z1(0.4 * a1, 0.7 * a1), z2(0.4 * a2, 0.7 * a2);
    f.c[0][ip] = z;
    f.c[1][ip] = z1;
    f.c[2][ip] = z2;
    f.c[0][im] = std::conj(z);
    f.c[1][im] = std::conj(z1);
    f.c[2][im] = std::conj(z2);
    return f;
}

}  // namespace

std::vector<CheckResult> verify_interpolation(std::uint64_t seed, double* div_out) {
    GridSpec g;
    g.N = 16;
    g.dt = 1.0 / 16.0;
    const std::size_t M = g.steps();

    double worst_gap = 0.0;
    for (int i = 0; i < 100; ++i) {
        FieldHistory h(g, M);
        SpectralVectorField base = random_solenoidal(g, sub_seed(seed, 200 + i), 1.5, 4);
        for (std::size_t n = 0; n < h.states.size(); ++n) {
            const double t = h.time(n);
            switch (i % 4) {
                case 0: h.states[n] = base; break;
                case 1: h.states[n] = heat_propagate(t, 1.0, base); break;
                case 2: {
                    SpectralVectorField s = base;
                    s *= std::cos(4.0 * t + 0.3);
                    h.states[n] = std::move(s);
                    break;
                }
                default:
                    h.states[n] = random_solenoidal(
                        g, sub_seed(seed, 5000 + 100 * i + static_cast<int>(n)), 1.5, 4);
            }
        }
        worst_gap = std::max(worst_gap, interpolation_gap(h));
        track(div_out, divergence_rel(h));
    }

    double worst_eq = 0.0;
    const int modes[3][3] = {{0, 0, 1}, {1, 2, 0}, {2, 1, 1}};
    for (const auto& m : modes) {
        FieldHistory h(g, M);
        SpectralVectorField f = single_mode_field(g, m[0], m[1], m[2]);
        for (auto& s : h.states) s = f;
        worst_eq = std::max(worst_eq, std::abs(interpolation_gap(h) - 1.0));
        track(div_out, divergence_rel(h));
    }

    std::vector<CheckResult> out;
    out.push_back(make_check("interpolation.gap_max", worst_gap, 1.0 + 1e-10,
                             "worst L4H1^2 / (supH12 * L2H32) over 100 histories"));
    out.push_back(make_check("interpolation.single_mode_equality", worst_eq, 1e-12,
                             "|gap - 1| on constant single-mode histories"));
    return out;
}

/*----------------------------------------------------------------- bilinear */

std::vector<CheckResult> verify_bilinear(std::uint64_t seed, double* div_out) {
    GridSpec g;
    g.N = 16;
    g.dt = 1.0 / 64.0;

    auto spread = [&](NormTag tag, double& mid_out) {
        double cs[4];
        int i = 0;
        for (int samples : {50, 200})
            for (std::uint64_t s : {sub_seed(seed, 1), sub_seed(seed, 2)})
                cs[i++] = estimate_bilinear_constant(g, samples, s, tag);
        const double mean = (cs[0] + cs[1] + cs[2] + cs[3]) / 4.0;
        mid_out = mean;
        double dev = 0.0;
        for (double c : cs) dev = std::max(dev, std::abs(c - mean) / mean);
        return dev;
    };

    double c10 = 0.0, c11 = 0.0;
    const double dev10 = spread(NormTag::X2, c10);
    const double dev11 = spread(NormTag::L5, c11);

    // bilinearity: the ratio ignores simultaneous rescaling of both factors
    const std::size_t M = g.steps();
    SpectralVectorField a = random_solenoidal(g, sub_seed(seed, 31), 1.5, 4);
    SpectralVectorField b = random_solenoidal(g, sub_seed(seed, 32), 1.5, 4);
    FieldHistory ha(g, M), hb(g, M);
    for (auto& s : ha.states) s = a;
    for (auto& s : hb.states) s = b;
    auto ratio_of = [&](const FieldHistory& x, const FieldHistory& y) {
        FieldHistory bf = bilinear_B(x, y, g.nu1);
        track(div_out, divergence_rel(bf));
        return spacetime_norms(bf).X1() /
               (working_norm(x, NormTag::X2) * working_norm(y, NormTag::X2));
    };
    const double r1 = ratio_of(ha, hb);
    for (auto& s : ha.states) s *= 3.0;
    for (auto& s : hb.states) s *= 0.5;
    const double r2 = ratio_of(ha, hb);

    std::vector<CheckResult> out;
    out.push_back(make_check("bilinear.c10_stability", dev10, 0.15,
                             "X1/(X2*X2) constant = " + fmt_g17(c10) +
                                 " across {50,200} samples x 2 seeds"));
    out.push_back(make_check("bilinear.c11_stability", dev11, 0.15,
                             "L5 constant = " + fmt_g17(c11) +
                                 " across {50,200} samples x 2 seeds"));
    out.push_back(make_check("bilinear.scale_invariance", std::abs(r1 - r2) / r1, 1e-12,
                             "ratio drift under v -> 3v, w -> w/2"));
    out.push_back(make_check("bilinear.c10_finite", c10 > 0.0 ? 0.0 : 1.0, 0.5,
                             "positive finite empirical constant"));
    return out;
}

/*------------------------------------------------------------------- kernel */

std::vector<CheckResult> verify_kernel() {
    std::vector<CheckResult> out;

    const double gamma_ref = 52.342777784553520;  // (945/32) sqrt(pi)
    out.push_back(make_check("kernel.gamma_11_2_at_50",
                             std::abs(lower_incomplete_gamma(50.0) - gamma_ref) / gamma_ref,
                             1e-9, "lower incomplete gamma, order 11/2, vs closed form"));

    // parabolic scaling K(t,x) = t^-2 K(1, x/sqrt(t)) over four decades in t
    const double dirs[3][3] = {{1, 0, 0}, {0.57735026918962576, 0.57735026918962576,
                                           0.57735026918962576},
                               {0.33129457822453731, -0.55215763037422888, 0.77302068252392034}};
    const int idxset[5][3] = {{0, 0, 0}, {0, 0, 1}, {0, 1, 2}, {1, 1, 2}, {2, 2, 2}};
    double worst_scale = 0.0;
    for (double t : {1e-2, 1e-1, 1.0, 1e1, 1e2})
        for (double r : {0.05, 0.5, 5.0, 50.0})
            for (const auto& d : dirs)
                for (const auto& jkm : idxset) {
                    const std::array<double, 3> x{r * d[0], r * d[1], r * d[2]};
                    const double rt = std::sqrt(t);
                    const std::array<double, 3> xs{x[0] / rt, x[1] / rt, x[2] / rt};
                    const cplx lhs = kernel_component(t, x, jkm[0], jkm[1], jkm[2]);
                    const cplx rhs =
                        kernel_component(1.0, xs, jkm[0], jkm[1], jkm[2]) / (t * t);
                    const double scale = std::max(std::abs(lhs), std::abs(rhs));
                    if (scale < 1e-280) continue;
                    worst_scale = std::max(worst_scale, std::abs(lhs - rhs) / scale);
                }
    out.push_back(make_check("kernel.scaling_residual", worst_scale, 1e-12,
                             "t in [1e-2,1e2], |x| in [0.05,50], 5 index classes"));

    // independent Fourier-side quadrature at 20 generic points
    Rng rng(0x05EE4u);
    double worst_oracle = 0.0;
    const double ts[3] = {0.5, 1.0, 2.0};
    for (int i = 0; i < 20; ++i) {
        std::array<double, 3> x;
        double r2 = 0.0;
        for (auto& xi : x) {
            xi = 2.5 * (2.0 * rng.uniform01() - 1.0);
            r2 += xi * xi;
        }
        if (r2 < 0.04) x[0] += 0.5;
        const double t = ts[i % 3];
        const auto& jkm = idxset[i % 5];
        const cplx val = kernel_component(t, x, jkm[0], jkm[1], jkm[2]);
        const cplx ora = kernel_fourier_oracle(t, x, jkm[0], jkm[1], jkm[2]);
        worst_oracle =
            std::max(worst_oracle, std::abs(val - ora) / std::max(std::abs(ora), 1e-300));
    }
    out.push_back(make_check("kernel.fourier_oracle_rel", worst_oracle, 1e-6,
                             "closed form vs sphere-quadrature inverse transform"));

    const double c_a = kernel_decay_constant(400, 16);
    const double c_b = kernel_decay_constant(800, 32);
    out.push_back(make_check("kernel.decay_stability", std::abs(c_a - c_b) / c_b, 0.01,
                             "sup (1+|x|)^4 |K(1,x)| = " + fmt_g17(c_b) +
                                 " under doubled sampling"));
    out.push_back(
        make_check("kernel.decay_bounded", c_b, 15.0, "sup (1+|x|)^4 |K(1,x)| finite"));

    const KernelNorm kn = kernel_l54_norm();
    out.push_back(make_check("kernel.l54_norm_ref", std::abs(kn.value - 2.1818043) / 2.1818043,
                             0.01,
                             "L^{5/4} norm vs frozen reference quadrature, tail_fraction = " +
                                 fmt_g17(kn.tail_fraction)));
    return out;
}

/*-------------------------------------------------------------------- noise */

std::vector<CheckResult> verify_noise(std::uint64_t seed, double* div_out) {
    GridSpec g;
    g.N = 8;
    g.dt = 1.0 / 32.0;
    const double nu = g.nu1;
    const std::size_t M = g.steps();
    const std::size_t K = 2;
    ForcingSequence G = random_forcing(g, sub_seed(seed, 7), K, 2.0, 2, 1.0);

    // five strongest modes of the load
    struct ModePick {
        double power;
        std::size_t idx;
        int k0, k1, k2;
    };
    std::vector<ModePick> picks;
    for_each_mode(g, [&](std::size_t idx, int k0, int k1, int k2) {
        double p = 0.0;
        for (const auto& m : G.members)
            for (int d = 0; d < 3; ++d) p += std::norm(m.c[d][idx]);
        if (p > 0.0) picks.push_back({p, idx, k0, k1, k2});
    });
    std::sort(picks.begin(), picks.end(),
              [](const ModePick& a, const ModePick& b) { return a.power > b.power; });
    picks.resize(5);

    const std::size_t times[3] = {M / 4, M / 2, M};
    const int R = 10000;
    double s1[5][3] = {}, s2[5][3] = {};  // exact-sampler |Z_hat|^2 moments
    double e1[5] = {}, e2[5] = {};        // EM |Z_hat|^2 moments at t = T
    double d1 = 0.0, d2 = 0.0;            // coupled |Z_em - Z_ex|^2 at t = T

    auto mode_sq = [&](const FieldHistory& h, std::size_t n, std::size_t idx) {
        double p = 0.0;
        for (int d = 0; d < 3; ++d) p += std::norm(h.states[n].c[d][idx]);
        return p;
    };

    for (int r = 0; r < R; ++r) {
        NoiseRealization noise = sample_increments(sub_seed(seed, 40000 + r), M, K, g.dt);
        FieldHistory zex = stochastic_convolution_exact(G, noise, nu);
        FieldHistory zem = stochastic_convolution_em(G, noise, nu);
        for (int m = 0; m < 5; ++m) {
            for (int j = 0; j < 3; ++j) {
                const double p = mode_sq(zex, times[j], picks[m].idx);
                s1[m][j] += p;
                s2[m][j] += p * p;
            }
            const double q = mode_sq(zem, M, picks[m].idx);
            e1[m] += q;
            e2[m] += q * q;
            double dd = 0.0;
            for (int d = 0; d < 3; ++d)
                dd += std::norm(zem.states[M].c[d][picks[m].idx] -
                                zex.states[M].c[d][picks[m].idx]);
            d1 += dd;
            d2 += dd * dd;
        }
        if (r == 0) {
            track(div_out, divergence_rel(zex));
            track(div_out, divergence_rel(zem));
        }
    }

    double worst_z_exact = 0.0;
    for (int m = 0; m < 5; ++m)
        for (int j = 0; j < 3; ++j) {
            const double mean = s1[m][j] / R;
            const double var = (s2[m][j] / R - mean * mean) / (R - 1);
            const double se = std::sqrt(std::max(var, 1e-300));
            const double law = convolution_variance(G, picks[m].k0, picks[m].k1, picks[m].k2,
                                                    g.dt * static_cast<double>(times[j]), nu);
            worst_z_exact = std::max(worst_z_exact, std::abs(mean - law) / se);
        }

    double worst_z_em = 0.0;
    for (int m = 0; m < 5; ++m) {
        const double mean = e1[m] / R;
        const double var = (e2[m] / R - mean * mean) / (R - 1);
        const double se = std::sqrt(std::max(var, 1e-300));
        const double law =
            convolution_variance_em(G, picks[m].k0, picks[m].k1, picks[m].k2, M, g.dt, nu);
        worst_z_em = std::max(worst_z_em, std::abs(mean - law) / se);
    }

    // closed-form EM bias halves with dt, per mode at t = T
    double worst_law_ratio = 0.0;
    for (int m = 0; m < 5; ++m) {
        const double ex = convolution_variance(G, picks[m].k0, picks[m].k1, picks[m].k2, g.T, nu);
        const double gap1 = std::abs(
            convolution_variance_em(G, picks[m].k0, picks[m].k1, picks[m].k2, M, g.dt, nu) - ex);
        const double gap2 = std::abs(convolution_variance_em(G, picks[m].k0, picks[m].k1,
                                                             picks[m].k2, 2 * M, g.dt / 2.0, nu) -
                                     ex);
        worst_law_ratio = std::max(worst_law_ratio, std::abs(gap2 / gap1 - 0.5));
    }

    // coupled pathwise gap: rms |Z_em - Z_ex| is O(dt); the refined run needs
    // the forcing restamped onto the half-step mesh
    ForcingSequence Gh = G;
    for (auto& mem : Gh.members) mem.grid.dt = g.dt / 2.0;
    const int R2 = 2000;
    double d1h = 0.0;
    for (int r = 0; r < R2; ++r) {
        NoiseRealization noise =
            sample_increments(sub_seed(seed, 80000 + r), 2 * M, K, g.dt / 2.0);
        FieldHistory zex = stochastic_convolution_exact(Gh, noise, nu);
        FieldHistory zem = stochastic_convolution_em(Gh, noise, nu);
        for (int m = 0; m < 5; ++m)
            for (int d = 0; d < 3; ++d)
                d1h += std::norm(zem.states[2 * M].c[d][picks[m].idx] -
                                 zex.states[2 * M].c[d][picks[m].idx]);
    }
    const double rms_full = std::sqrt(d1 / (5.0 * R));
    const double rms_half = std::sqrt(d1h / (5.0 * R2));
    const double coupled_ratio = rms_half / rms_full;

    // Ito isometry bound: sup_t E||Z||_{H^{1/2}}^2 <= ||G||^2_{H^{-1/2}} / (2 nu)
    const double gm = sobolev_norm(G, -0.5, 2.0);
    const double cell = g.L * g.L * g.L;
    double sup_ratio = 0.0, mono_defect = 0.0, prev = -1.0;
    for (std::size_t n = 1; n <= M; ++n) {
        double ez = 0.0;
        for_each_mode(g, [&](std::size_t idx, int k0, int k1, int k2) {
            double p = 0.0;
            for (const auto& mem : G.members)
                for (int d = 0; d < 3; ++d) p += std::norm(mem.c[d][idx]);
            if (p == 0.0) return;
            const double xi = std::sqrt(laplace_symbol(g, k0, k1, k2));
            ez += cell * xi *
                  convolution_variance(G, k0, k1, k2, g.dt * static_cast<double>(n), nu);
        });
        const double ratio = ez / (gm * gm);
        sup_ratio = std::max(sup_ratio, ratio);
        if (prev >= 0.0) mono_defect = std::max(mono_defect, prev - ratio);
        prev = ratio;
    }

    std::vector<CheckResult> out;
    out.push_back(make_check("noise.exact_variance_z", worst_z_exact, 3.0,
                             "max |sample - law|/SE, 5 modes x 3 times, 10^4 paths"));
    out.push_back(make_check("noise.em_variance_z", worst_z_em, 3.0,
                             "EM sample variance vs discrete law at t = T"));
    out.push_back(make_check("noise.law_gap_halving", worst_law_ratio, 0.1,
                             "|EM-law/exact-law gap ratio - 1/2| under dt -> dt/2"));
    out.push_back(make_check("noise.coupled_gap_halving", std::abs(coupled_ratio - 0.5), 0.1,
                             "pathwise rms(Z_em - Z_ex) ratio = " + fmt_g17(coupled_ratio)));
    out.push_back(make_check("noise.isometry_bound", sup_ratio * 2.0 * nu, 1.0 + 1e-12,
                             "sup_t E||Z||^2_{H1/2} * 2nu / ||G||^2_{H-1/2}"));
    out.push_back(make_check("noise.isometry_monotone", mono_defect, 1e-14,
                             "E||Z(t)||^2_{H1/2} nondecreasing in t"));
    return out;
}

/*----------------------------------------------------------------- dispatch */

std::vector<CheckResult> verify_suite(const std::string& name, std::uint64_t seed,
                                      double* div_out) {
    if (name == "semigroup") return verify_semigroup(seed, div_out);
    if (name == "interpolation") return verify_interpolation(seed, div_out);
    if (name == "bilinear") return verify_bilinear(seed, div_out);
    if (name == "kernel") return verify_kernel();
    if (name == "noise") return verify_noise(seed, div_out);
    if (name == "all") {
        std::vector<CheckResult> all;
        for (const char* s : {"semigroup", "interpolation", "bilinear", "kernel", "noise"}) {
            auto part = verify_suite(s, seed, div_out);
            all.insert(all.end(), part.begin(), part.end());
        }
        return all;
    }
    throw UnsupportedError("unknown verify suite: " + name);
}

bool all_pass(const std::vector<CheckResult>& checks) {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.pass; });
}

std::string format_checks(const std::vector<CheckResult>& checks) {
    std::ostringstream os;
    for (const auto& c : checks) {
        os << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << "  measured=" << fmt_g17(c.measured)
           << " bound=" << fmt_g17(c.bound);
        if (!c.detail.empty()) os << "  (" << c.detail << ")";
        os << '\n';
    }
    return os.str();
}

}  // namespace mhd
