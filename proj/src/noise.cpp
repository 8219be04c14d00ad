#include "mhd/noise.hpp"

#include <cmath>

#include "mhd/error.hpp"
#include "mhd/rng.hpp"

namespace mhd {

NoiseRealization NoiseRealization::prefix(std::size_t Mp) const {
    if (Mp > M) throw SizeMismatchError("NoiseRealization::prefix: longer than source");
    NoiseRealization out;
    out.seed = seed;
    out.dt = dt;
    out.M = Mp;
    out.K = K;
    out.dw.resize(K * Mp);
    for (std::size_t kappa = 0; kappa < K; ++kappa)
        for (std::size_t n = 0; n < Mp; ++n) out.dw[kappa * Mp + n] = dw[kappa * M + n];
    return out;
}

NoiseRealization sample_increments(std::uint64_t seed, std::size_t M, std::size_t K, double dt) {
    if (M < 1 || K < 1 || !(dt > 0.0))
        throw DomainError("sample_increments: need M, K >= 1 and dt > 0");
    NoiseRealization out;
    out.seed = seed;
    out.dt = dt;
    out.M = M;
    out.K = K;
    out.dw.resize(M * K);
    Rng rng(seed);
    const double root_dt = std::sqrt(dt);
    for (auto& x : out.dw) x = root_dt * rng.gaussian();
    return out;
}

namespace {

void check_forcing(const ForcingSequence& G, const NoiseRealization& noise) {
    if (G.K() != noise.K)
        throw SizeMismatchError("stochastic convolution: K mismatch between forcing and noise");
}

void heat_step(const GridSpec& g, double nu, SpectralVectorField& f) {
    for_each_mode(g, [&](std::size_t idx, int k0, int k1, int k2) {
        const double factor = std::exp(-nu * g.dt * laplace_symbol(g, k0, k1, k2));
        for (int d = 0; d < 3; ++d) f.c[d][idx] *= factor;
    });
}

}  // namespace

FieldHistory stochastic_convolution_em(const ForcingSequence& G, const NoiseRealization& noise,
                                       double nu) {
    check_forcing(G, noise);
    const GridSpec& g = G.members.at(0).grid;
    if (std::abs(noise.dt - g.dt) > 1e-15 * g.dt)
        throw SizeMismatchError("stochastic_convolution_em: dt mismatch");
    FieldHistory out(g, noise.M);
    SpectralVectorField z(g);
    for (std::size_t n = 1; n <= noise.M; ++n) {
        for (std::size_t kappa = 0; kappa < noise.K; ++kappa)
            axpy(noise.increment(kappa, n), G.members[kappa], z);
        heat_step(g, nu, z);
        out.states[n] = z;
    }
    return out;
}

FieldHistory stochastic_convolution_em(const std::vector<ForcingSequence>& steps,
                                       const NoiseRealization& noise, double nu) {
    if (steps.size() != noise.M)
        throw SizeMismatchError("stochastic_convolution_em: need one forcing per step");
    const GridSpec& g = steps.at(0).members.at(0).grid;
    FieldHistory out(g, noise.M);
    SpectralVectorField z(g);
    for (std::size_t n = 1; n <= noise.M; ++n) {
        const ForcingSequence& G = steps[n - 1];
        check_forcing(G, noise);
        for (std::size_t kappa = 0; kappa < noise.K; ++kappa)
            axpy(noise.increment(kappa, n), G.members[kappa], z);
        heat_step(g, nu, z);
        out.states[n] = z;
    }
    return out;
}

FieldHistory stochastic_convolution_exact(const ForcingSequence& G,
                                          const NoiseRealization& noise, double nu) {
    check_forcing(G, noise);
    const GridSpec& g = G.members.at(0).grid;
    const double dt = noise.dt;
    const std::size_t n_modes = g.point_count();

    // per-mode decay e^{-lambda dt} and the variance-matching scale
    // sqrt((1 - e^{-2 lambda dt}) / (2 lambda dt)); -> 1 as lambda -> 0
    std::vector<double> decay(n_modes), scale(n_modes);
    for_each_mode(g, [&](std::size_t idx, int k0, int k1, int k2) {
        const double lambda = nu * laplace_symbol(g, k0, k1, k2);
        decay[idx] = std::exp(-lambda * dt);
        const double x = 2.0 * lambda * dt;
        scale[idx] = x == 0.0 ? 1.0 : std::sqrt(-std::expm1(-x) / x);
    });

    FieldHistory out(g, noise.M);
    SpectralVectorField z(g);
    for (std::size_t n = 1; n <= noise.M; ++n) {
        for (int d = 0; d < 3; ++d)
            for (std::size_t idx = 0; idx < n_modes; ++idx) z.c[d][idx] *= decay[idx];
        for (std::size_t kappa = 0; kappa < noise.K; ++kappa) {
            const double dwn = noise.increment(kappa, n);
            for (int d = 0; d < 3; ++d) {
                const auto& gk = G.members[kappa].c[d];
                for (std::size_t idx = 0; idx < n_modes; ++idx)
                    z.c[d][idx] += gk[idx] * (dwn * scale[idx]);
            }
        }
        out.states[n] = z;
    }
    return out;
}

FieldHistory stochastic_convolution_exact(const ForcingSequence& G, std::uint64_t seed,
                                          std::size_t M, double dt, double nu) {
    return stochastic_convolution_exact(G, sample_increments(seed, M, G.K(), dt), nu);
}

double convolution_variance(const ForcingSequence& G, int k0, int k1, int k2, double t,
                            double nu) {
    const GridSpec& g = G.members.at(0).grid;
    const int i0 = (k0 + g.N) % g.N, i1 = (k1 + g.N) % g.N, i2 = (k2 + g.N) % g.N;
    const std::size_t idx = flat_index(g, i0, i1, i2);
    double g2 = 0.0;
    for (const auto& m : G.members)
        g2 += std::norm(m.c[0][idx]) + std::norm(m.c[1][idx]) + std::norm(m.c[2][idx]);
    const double lambda = nu * laplace_symbol(g, k0, k1, k2);
    const double factor = lambda == 0.0 ? t : -std::expm1(-2.0 * lambda * t) / (2.0 * lambda);
    return g2 * factor;
}

double convolution_variance_em(const ForcingSequence& G, int k0, int k1, int k2, std::size_t n,
                               double dt, double nu) {
    const GridSpec& g = G.members.at(0).grid;
    const int i0 = (k0 + g.N) % g.N, i1 = (k1 + g.N) % g.N, i2 = (k2 + g.N) % g.N;
    const std::size_t idx = flat_index(g, i0, i1, i2);
    double g2 = 0.0;
    for (const auto& m : G.members)
        g2 += std::norm(m.c[0][idx]) + std::norm(m.c[1][idx]) + std::norm(m.c[2][idx]);
    const double lambda = nu * laplace_symbol(g, k0, k1, k2);
    if (lambda == 0.0) return g2 * dt * static_cast<double>(n);
    const double q = std::exp(-2.0 * lambda * dt);
    const double geom = q * -std::expm1(-2.0 * lambda * dt * static_cast<double>(n)) /
                        -std::expm1(-2.0 * lambda * dt);
    return g2 * dt * geom;
}

}  // namespace mhd
