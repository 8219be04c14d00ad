#include "mhd/fields.hpp"

#include <cmath>

#include "mhd/error.hpp"
#include "mhd/rng.hpp"

namespace mhd {

SpectralScalarField divergence(const SpectralVectorField& v) {
    SpectralScalarField out(v.grid);
    const double s = 2.0 * M_PI / v.grid.L;
    for_each_mode(v.grid, [&](std::size_t idx, int k0, int k1, int k2) {
        const cplx dot = static_cast<double>(k0) * v.c[0][idx] +
                         static_cast<double>(k1) * v.c[1][idx] +
                         static_cast<double>(k2) * v.c[2][idx];
        out.c[idx] = cplx(0.0, s) * dot;
    });
    return out;
}

double divergence_rel(const SpectralVectorField& v) {
    double worst = 0.0, scale = 0.0;
    for_each_mode(v.grid, [&](std::size_t idx, int k0, int k1, int k2) {
        const double kn = std::sqrt(static_cast<double>(k0) * k0 +
                                    static_cast<double>(k1) * k1 +
                                    static_cast<double>(k2) * k2);
        const cplx dot = static_cast<double>(k0) * v.c[0][idx] +
                         static_cast<double>(k1) * v.c[1][idx] +
                         static_cast<double>(k2) * v.c[2][idx];
        const double mag = std::sqrt(std::norm(v.c[0][idx]) + std::norm(v.c[1][idx]) +
                                     std::norm(v.c[2][idx]));
        worst = std::max(worst, std::abs(dot));
        scale = std::max(scale, kn * mag);
    });
    if (scale == 0.0) return 0.0;
    return worst / scale;
}

SpectralVectorField random_solenoidal(const GridSpec& g, std::uint64_t seed, double sigma,
                                      int kmax, double amplitude) {
    g.validate();
    if (sigma < 0.0) throw DomainError("random_solenoidal: sigma must be >= 0");
    if (kmax < 1 || 3 * kmax >= g.N)
        throw DomainError("random_solenoidal: need 1 <= kmax < N/3");

    SpectralVectorField out(g);
    for (int k0 = -kmax; k0 <= kmax; ++k0) {
        for (int k1 = -kmax; k1 <= kmax; ++k1) {
            for (int k2 = -kmax; k2 <= kmax; ++k2) {
                const double kk = static_cast<double>(k0) * k0 +
                                  static_cast<double>(k1) * k1 +
                                  static_cast<double>(k2) * k2;
                if (kk == 0.0 || kk > static_cast<double>(kmax) * kmax) continue;
                // canonical representative of the +-k pair
                const bool canonical = (k0 > 0) || (k0 == 0 && k1 > 0) ||
                                       (k0 == 0 && k1 == 0 && k2 > 0);
                if (!canonical) continue;

                Rng rng(sub_seed(seed, mode_key(k0, k1, k2)));
                cplx a[3];
                for (auto& z : a) z = cplx(rng.gaussian(), rng.gaussian());
                // project onto k-perp and normalize the direction
                const cplx dot = static_cast<double>(k0) * a[0] +
                                 static_cast<double>(k1) * a[1] +
                                 static_cast<double>(k2) * a[2];
                a[0] -= dot * (k0 / kk);
                a[1] -= dot * (k1 / kk);
                a[2] -= dot * (k2 / kk);
                double mag = std::sqrt(std::norm(a[0]) + std::norm(a[1]) + std::norm(a[2]));
                while (mag < 1e-8) {  // dartboard-null draw: reroll
                    for (auto& z : a) z = cplx(rng.gaussian(), rng.gaussian());
                    const cplx d2 = static_cast<double>(k0) * a[0] +
                                    static_cast<double>(k1) * a[1] +
                                    static_cast<double>(k2) * a[2];
                    a[0] -= d2 * (k0 / kk);
                    a[1] -= d2 * (k1 / kk);
                    a[2] -= d2 * (k2 / kk);
                    mag = std::sqrt(std::norm(a[0]) + std::norm(a[1]) + std::norm(a[2]));
                }
                const double target = amplitude * std::pow(1.0 + std::sqrt(kk), -sigma);
                const double scale = target / mag;

                const int i0 = (k0 + g.N) % g.N, i1 = (k1 + g.N) % g.N, i2 = (k2 + g.N) % g.N;
                const int j0 = (g.N - i0) % g.N, j1 = (g.N - i1) % g.N, j2 = (g.N - i2) % g.N;
                const std::size_t ip = flat_index(g, i0, i1, i2);
                const std::size_t im = flat_index(g, j0, j1, j2);
                for (int d = 0; d < 3; ++d) {
                    out.c[d][ip] = scale * a[d];
                    out.c[d][im] = std::conj(scale * a[d]);
                }
            }
        }
    }
    return out;
}

ForcingSequence random_forcing(const GridSpec& g, std::uint64_t seed, std::size_t K,
                               double sigma, int kmax, double amplitude) {
    ForcingSequence seq;
    seq.members.reserve(K);
    for (std::size_t kappa = 0; kappa < K; ++kappa)
        seq.members.push_back(
            random_solenoidal(g, sub_seed(seed, 0x466F7263ull + kappa), sigma, kmax, amplitude));
    return seq;
}

double divergence_rel(const ForcingSequence& G) {
    double worst = 0.0;
    for (const auto& m : G.members) worst = std::max(worst, divergence_rel(m));
    return worst;
}

double divergence_rel(const FieldHistory& h) {
    double worst = 0.0;
    for (const auto& s : h.states) worst = std::max(worst, divergence_rel(s));
    return worst;
}

double max_abs_diff(const FieldHistory& a, const FieldHistory& b) {
    double m = 0.0;
    for (std::size_t n = 0; n < a.states.size(); ++n)
        m = std::max(m, max_abs_diff(a.states[n], b.states[n]));
    return m;
}

}  // namespace mhd
