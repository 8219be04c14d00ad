#ifndef MHD_NOISE_HPP
#define MHD_NOISE_HPP

#include <cstdint>
#include <vector>

#include "mhd/fields.hpp"

namespace mhd {

// Seeded table of Wiener increments dw^kappa_n ~ Normal(0, dt),
// kappa = 0..K-1, n = 1..M. Regeneration from the same seed is bit-identical.
struct NoiseRealization {
    std::uint64_t seed = 0;
    double dt = 0.0;
    std::size_t M = 0;
    std::size_t K = 0;
    std::vector<double> dw;  // layout [kappa][n]

    double increment(std::size_t kappa, std::size_t n) const {  // n in 1..M
        return dw[kappa * M + (n - 1)];
    }

    // same Brownian paths restricted to the first Mp steps
    NoiseRealization prefix(std::size_t Mp) const;
};

NoiseRealization sample_increments(std::uint64_t seed, std::size_t M, std::size_t K, double dt);

// Euler-Maruyama stochastic convolution (left-point Ito rule):
//   Z_0 = 0,  Z_n = S(dt) (Z_{n-1} + sum_kappa G^kappa(t_{n-1}) dw^kappa_n).
// Constant-in-time forcing:
FieldHistory stochastic_convolution_em(const ForcingSequence& G, const NoiseRealization& noise,
                                       double nu);
// piecewise-constant forcing, steps[n-1] in force on [t_{n-1}, t_n)
FieldHistory stochastic_convolution_em(const std::vector<ForcingSequence>& steps,
                                       const NoiseRealization& noise, double nu);

// Exact-in-law sampler for constant G: per mode the convolution is an
// Ornstein-Uhlenbeck recursion
//   Z_hat(t_n) = e^{-lambda dt} Z_hat(t_{n-1}) + eta_n,
// with eta_n = sum_kappa G_hat^kappa(k) dw^kappa_n sqrt((1-e^{-2 lambda dt})/(2 lambda dt)),
// driven by the same increment table as the EM sampler (same seed => coupled
// paths). The marginal law at every mesh time is exact, including the
// cross-component covariance sum_kappa G_hat (G_hat)^H (1-e^{-2 lambda t})/(2 lambda).
FieldHistory stochastic_convolution_exact(const ForcingSequence& G, std::uint64_t seed,
                                          std::size_t M, double dt, double nu);
FieldHistory stochastic_convolution_exact(const ForcingSequence& G, const NoiseRealization& noise,
                                          double nu);

// closed-form per-mode variance E |Z_hat(t)|^2_{C^3} of the exact law
double convolution_variance(const ForcingSequence& G, int k0, int k1, int k2, double t,
                            double nu);
// the EM sampler's own (discrete-law) variance at t_n = n dt
double convolution_variance_em(const ForcingSequence& G, int k0, int k1, int k2, std::size_t n,
                               double dt, double nu);

}  // namespace mhd

#endif
