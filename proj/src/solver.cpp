#include "mhd/solver.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "mhd/error.hpp"
#include "mhd/rng.hpp"
#include "mhd/transform.hpp"

namespace mhd {

namespace {

void check_pair(const SpectralVectorField& a, const SpectralVectorField& b, const char* who) {
    if (!a.grid.same_box(b.grid) || a.grid.N != b.grid.N)
        throw SizeMismatchError(std::string(who) + ": grid mismatch");
}

FieldHistory hist_sub(const FieldHistory& a, const FieldHistory& b) {
    if (a.M() != b.M() || !a.same_mesh(b)) throw SizeMismatchError("hist_sub: shape mismatch");
    FieldHistory out = a;
    for (std::size_t n = 0; n < out.states.size(); ++n) out.states[n] -= b.states[n];
    return out;
}

double pair_norm(const FieldHistory& v, const FieldHistory& w, NormTag tag) {
    return working_norm(v, tag) + working_norm(w, tag);
}

}  // namespace

std::pair<SpectralVectorField, SpectralVectorField> elsasser_from_physical(
    const SpectralVectorField& u0, const SpectralVectorField& b0) {
    check_pair(u0, b0, "elsasser_from_physical");
    return {u0 + b0, u0 - b0};
}

std::pair<SpectralVectorField, SpectralVectorField> physical_from_elsasser(
    const SpectralVectorField& v, const SpectralVectorField& w) {
    check_pair(v, w, "physical_from_elsasser");
    SpectralVectorField u = v + w, b = v - w;
    u *= 0.5;
    b *= 0.5;
    return {u, b};
}

std::pair<ForcingSequence, ForcingSequence> forcing_from_physical(const ForcingSequence& g1,
                                                                  const ForcingSequence& g2) {
    if (g1.K() != g2.K()) throw SizeMismatchError("forcing_from_physical: member count mismatch");
    ForcingSequence G1, G2;
    G1.members.reserve(g1.K());
    G2.members.reserve(g1.K());
    for (std::size_t k = 0; k < g1.K(); ++k) {
        SpectralVectorField p1 = leray_project(g1.members[k]);
        SpectralVectorField p2 = leray_project(g2.members[k]);
        G1.members.push_back(p1 + p2);
        G2.members.push_back(p1 - p2);
    }
    return {G1, G2};
}

std::pair<ForcingSequence, ForcingSequence> physical_from_forcing(const ForcingSequence& G1,
                                                                  const ForcingSequence& G2) {
    if (G1.K() != G2.K()) throw SizeMismatchError("physical_from_forcing: member count mismatch");
    ForcingSequence g1, g2;
    g1.members.reserve(G1.K());
    g2.members.reserve(G1.K());
    for (std::size_t k = 0; k < G1.K(); ++k) {
        SpectralVectorField s = G1.members[k] + G2.members[k];
        SpectralVectorField d = G1.members[k] - G2.members[k];
        s *= 0.5;
        d *= 0.5;
        g1.members.push_back(std::move(s));
        g2.members.push_back(std::move(d));
    }
    return {g1, g2};
}

std::pair<FieldHistory, FieldHistory> linear_part(const SpectralVectorField& v0,
                                                  const SpectralVectorField& w0,
                                                  const ForcingSequence& G1,
                                                  const ForcingSequence& G2,
                                                  const NoiseRealization& noise) {
    check_pair(v0, w0, "linear_part");
    const GridSpec& g = v0.grid;
    if (std::abs(noise.dt - g.dt) > 1e-12 * g.dt)
        throw SizeMismatchError("linear_part: noise step does not match mesh step");
    const std::size_t M = noise.M;

    auto one = [&](const SpectralVectorField& data, const ForcingSequence& G, double nu) {
        FieldHistory h(g, M);
        if (!G.empty()) h = stochastic_convolution_em(G, noise, nu);
        for (std::size_t n = 0; n < h.states.size(); ++n) {
            SpectralVectorField flow = heat_propagate(g.dt * static_cast<double>(n), nu, data);
            h.states[n] += flow;
        }
        return h;
    };
    return {one(v0, G1, g.nu1), one(w0, G2, g.nu2)};
}

std::pair<PicardState, ContractionReport> picard_solve(const FieldHistory& v1,
                                                       const FieldHistory& w1, NormTag tag,
                                                       double tol, int max_iter, double c_hat,
                                                       const FieldHistory* v_start,
                                                       const FieldHistory* w_start) {
    if (v1.M() != w1.M() || !v1.same_mesh(w1))
        throw SizeMismatchError("picard_solve: history shape mismatch");
    if (tol <= 0.0 || max_iter < 1) throw DomainError("picard_solve: bad tolerance or budget");
    if ((v_start == nullptr) != (w_start == nullptr))
        throw DomainError("picard_solve: start pair must be given together");
    const GridSpec& g = v1.grid;

    PicardState st{v_start ? *v_start : v1, w_start ? *w_start : w1, v1, w1, 0, {}, tag};
    if (v_start && (v_start->M() != v1.M() || w_start->M() != w1.M()))
        throw SizeMismatchError("picard_solve: start history shape mismatch");
    ContractionReport rep;
    rep.epsilon = pair_norm(v1, w1, tag);
    rep.c_estimate = c_hat;
    rep.product = 4.0 * rep.epsilon * c_hat;

    const double stop = tol * rep.epsilon;
    for (int it = 1; it <= max_iter; ++it) {
        FieldHistory bv = bilinear_B(st.w_hist, st.v_hist, g.nu1);
        FieldHistory bw = bilinear_B(st.v_hist, st.w_hist, g.nu2);
        FieldHistory nv = st.v1_hist;
        FieldHistory nw = st.w1_hist;
        for (std::size_t n = 0; n < nv.states.size(); ++n) {
            nv.states[n] -= bv.states[n];
            nw.states[n] -= bw.states[n];
        }
        const double diff =
            pair_norm(hist_sub(nv, st.v_hist), hist_sub(nw, st.w_hist), tag);
        st.v_hist = std::move(nv);
        st.w_hist = std::move(nw);
        st.iter = it;
        st.diffs.push_back(diff);
        if (diff <= stop) {
            rep.converged = true;
            break;
        }
    }

    rep.iterations = st.iter;
    if (!st.diffs.empty())
        rep.final_residual =
            rep.epsilon > 0.0 ? st.diffs.back() / rep.epsilon : st.diffs.back();
    for (std::size_t i = 1; i < st.diffs.size(); ++i)
        if (st.diffs[i - 1] > 0.0)
            rep.ratio_max = std::max(rep.ratio_max, st.diffs[i] / st.diffs[i - 1]);
    return {std::move(st), rep};
}

double estimate_bilinear_constant(const GridSpec& g, int samples, std::uint64_t seed,
                                  NormTag tag) {
    if (samples < 1) throw DomainError("estimate_bilinear_constant: samples must be >= 1");
    g.validate();
    const std::size_t M = g.steps();
    int kmax = 2;
    while (3 * (kmax + 1) < g.N && kmax < 4) ++kmax;

    // three time profiles: frozen, heat-relaxing, oscillating
    auto make_history = [&](const SpectralVectorField& f0, int style) {
        FieldHistory h(g, M);
        for (std::size_t n = 0; n < h.states.size(); ++n) {
            const double t = h.time(n);
            switch (style % 3) {
                case 0: h.states[n] = f0; break;
                case 1: h.states[n] = heat_propagate(t, 1.0, f0); break;
                default: {
                    SpectralVectorField s = f0;
                    s *= std::cos(3.0 * M_PI * t / std::max(g.T, g.dt) + 0.25);
                    h.states[n] = std::move(s);
                }
            }
        }
        return h;
    };

    double best = 0.0;
    for (int s = 0; s < samples; ++s) {
        SpectralVectorField a = random_solenoidal(g, sub_seed(seed, 2 * s), 1.5, kmax);
        SpectralVectorField b = random_solenoidal(g, sub_seed(seed, 2 * s + 1), 1.5, kmax);
        FieldHistory ha = make_history(a, s);
        FieldHistory hb = make_history(b, s + 1);
        const double na = working_norm(ha, tag);
        const double nb = working_norm(hb, tag);
        if (na <= 0.0 || nb <= 0.0) continue;
        std::vector<double> nus{g.nu1};
        if (g.nu2 != g.nu1) nus.push_back(g.nu2);
        for (double nu : nus) {
            FieldHistory bh = bilinear_B(ha, hb, nu);
            const double num = tag == NormTag::X2 ? spacetime_norms(bh).X1()
                                                  : working_norm(bh, NormTag::L5);
            best = std::max(best, num / (na * nb));
        }
    }
    return best;
}

double find_local_T0(const SpectralVectorField& v0, const SpectralVectorField& w0,
                     const ForcingSequence& G1, const ForcingSequence& G2,
                     const NoiseRealization& noise, double c_hat, NormTag tag, double margin) {
    if (c_hat < 0.0 || margin < 0.0) throw DomainError("find_local_T0: negative gate inputs");
    const double threshold =
        c_hat > 0.0 ? 1.0 / (4.0 * c_hat * (1.0 + margin))
                    : std::numeric_limits<double>::infinity();

    std::size_t m = noise.M;
    for (;;) {
        NoiseRealization cut = noise.prefix(m);
        auto [v1, w1] = linear_part(v0, w0, G1, G2, cut);
        if (pair_norm(v1, w1, tag) < threshold) return noise.dt * static_cast<double>(m);
        if (m / 2 < 4)
            throw NoLocalWindowError(
                "find_local_T0: no window above 4 dt satisfies the smallness gate");
        m /= 2;
    }
}

ContractionReport check_global_smallness(const SpectralVectorField& v0,
                                         const SpectralVectorField& w0,
                                         const ForcingSequence& G1, const ForcingSequence& G2,
                                         double c_hat, NormTag tag) {
    check_pair(v0, w0, "check_global_smallness");
    const GridSpec& g = v0.grid;

    const double dn = tag == NormTag::X2 ? 0.5 : -0.4;  // data regularity index
    const double fn = tag == NormTag::X2 ? 0.5 : -1.0;  // forcing regularity index
    const double p = tag == NormTag::X2 ? 2.0 : 5.0;

    double eps = sobolev_norm(v0, dn, p) + sobolev_norm(w0, dn, p);
    if (!G1.empty()) eps += sobolev_norm(G1, fn, p) / std::sqrt(2.0 * g.nu1);
    if (!G2.empty()) eps += sobolev_norm(G2, fn, p) / std::sqrt(2.0 * g.nu2);

    ContractionReport rep;
    rep.epsilon = eps;
    rep.c_estimate = c_hat;
    rep.product = 4.0 * eps * c_hat;
    rep.converged = rep.product < 1.0;
    return rep;
}

SpectralScalarField pressure_recovery(const SpectralVectorField& u,
                                      const SpectralVectorField& b) {
    check_pair(u, b, "pressure_recovery");
    const GridSpec& g = u.grid;
    const std::size_t n = g.point_count();
    const double inv_n = 1.0 / static_cast<double>(n);

    SpectralVectorField ud = u, bd = b;
    dealias(ud);
    dealias(bd);
    std::array<std::vector<cplx>, 3> us, bs;
    for (int d = 0; d < 3; ++d) {
        us[d] = ud.c[d];
        fft3(g, us[d], FFTW_BACKWARD);
        bs[d] = bd.c[d];
        fft3(g, bs[d], FFTW_BACKWARD);
    }

    // pi_hat = -(k_i k_j / |k|^2) M_ij_hat, M = u (x) u - b (x) b
    SpectralScalarField pi(g);
    std::vector<cplx> prod(n);
    for (int i = 0; i < 3; ++i) {
        for (int j = i; j < 3; ++j) {
            for (std::size_t p = 0; p < n; ++p)
                prod[p] = cplx(us[i][p].real() * us[j][p].real() -
                                   bs[i][p].real() * bs[j][p].real(),
                               0.0);
            fft3(g, prod, FFTW_FORWARD);
            SpectralScalarField m(g);
            m.c = prod;
            dealias(m);
            const double mult = i == j ? 1.0 : 2.0;  // symmetric off-diagonal pairs
            for_each_mode(g, [&](std::size_t idx, int k0, int k1, int k2) {
                const double kk = static_cast<double>(k0) * k0 +
                                  static_cast<double>(k1) * k1 +
                                  static_cast<double>(k2) * k2;
                if (kk == 0.0) return;
                const int ki = i == 0 ? k0 : (i == 1 ? k1 : k2);
                const int kj = j == 0 ? k0 : (j == 1 ? k1 : k2);
                pi.c[idx] -= mult * (static_cast<double>(ki) * kj / kk) * m.c[idx] * inv_n;
            });
        }
    }
    return pi;
}

namespace {

std::pair<double, double> residual_pair(const FieldHistory& v, const FieldHistory& w,
                                        const FieldHistory& v1, const FieldHistory& w1,
                                        bool refined) {
    if (v.M() != w.M() || v.M() != v1.M() || v.M() != w1.M() || !v.same_mesh(w) ||
        !v.same_mesh(v1) || !v.same_mesh(w1))
        throw SizeMismatchError("mild_residual: history shape mismatch");
    const GridSpec& g = v.grid;
    FieldHistory bv = refined ? bilinear_B_refined(w, v, g.nu1) : bilinear_B(w, v, g.nu1);
    FieldHistory bw = refined ? bilinear_B_refined(v, w, g.nu2) : bilinear_B(v, w, g.nu2);
    double rv = 0.0, rw = 0.0;
    for (std::size_t n = 0; n < v.states.size(); ++n) {
        SpectralVectorField ev = v.states[n] - v1.states[n];
        ev += bv.states[n];
        SpectralVectorField ew = w.states[n] - w1.states[n];
        ew += bw.states[n];
        rv = std::max(rv, sobolev_norm(ev, 0.5, 2.0));
        rw = std::max(rw, sobolev_norm(ew, 0.5, 2.0));
    }
    return {rv, rw};
}

}  // namespace

std::pair<double, double> fixed_point_residual(const FieldHistory& v_hist,
                                               const FieldHistory& w_hist,
                                               const FieldHistory& v1_hist,
                                               const FieldHistory& w1_hist) {
    return residual_pair(v_hist, w_hist, v1_hist, w1_hist, false);
}

std::pair<double, double> mild_residual(const FieldHistory& v_hist, const FieldHistory& w_hist,
                                        const FieldHistory& v1_hist,
                                        const FieldHistory& w1_hist) {
    return residual_pair(v_hist, w_hist, v1_hist, w1_hist, true);
}

}  // namespace mhd
