#ifndef MHD_OSEEN_HPP
#define MHD_OSEEN_HPP

#include <array>
#include <complex>

namespace mhd {

/*--------------------------------------------------------------------------
 * The kernel of S(t) P div: the convolution kernel K_{j,k,m}(t,x) whose
 * inverse-Fourier definition (symbol in the unscaled frequency, inversion in
 * the 2 pi convention) is
 *
 *   K_{j,k,m}(t,x) = int e^{-t|xi|^2} xi_j xi_k xi_m |xi|^{-2}
 *                        e^{2 pi i x.xi} dxi.
 *
 * Closed form (z = pi^2 |x|^2 / t, S_jkm = d_jk x_m + d_jm x_k + d_km x_j,
 * gamma the lower incomplete gamma function):
 *
 *   K_{j,k,m}(t,x) = i pi^{-5/2} [ -x_j x_k x_m |x|^{-7} gamma(7/2, z)
 *                                  + (1/2) S_jkm(x) |x|^{-5} gamma(5/2, z) ].
 *
 * Purely imaginary, odd in x, fully symmetric in (j,k,m), and exactly
 * self-similar: K(t,x) = t^{-2} K(1, t^{-1/2} x).
 *-------------------------------------------------------------------------*/

// gamma(11/2, z) = int_0^z a^{9/2} e^{-a} da. Monotone, -> (945/32) sqrt(pi).
double lower_incomplete_gamma(double z);

// components j,k,m in {0,1,2}
std::complex<double> kernel_component(double t, const std::array<double, 3>& x, int j, int k,
                                      int m);

// the contracted kernel (K)^j = -i sum_{k,m} K_{j,k,m}; real-valued
std::array<double, 3> kernel_summed(double t, const std::array<double, 3>& x);

// Direct numerical evaluation of the defining integral (spherical reduction
// to a 1-D adaptive quadrature; the azimuthal integral is exact for the
// cubic-in-omega integrand). Absolute accuracy ~1e-8 for |x| <= 10 and
// t in [0.1, 10]; raises AccuracyError if the error estimate is larger.
std::complex<double> kernel_fourier_oracle(double t, const std::array<double, 3>& x, int j,
                                           int k, int m);

struct KernelNorm {
    double value;
    double quadrature_error;  // radial engine estimate plus analytic tail bound
    double tail_fraction;     // bound on the omitted |x| > radius mass, relative
};

// || |K(1,.)| ||_{L_{5/4}(R^3)} of the contracted kernel by radial-angular
// quadrature plus an analytic |x|^{-4}-decay tail bound; the angular orders
// are exposed for refinement studies.
KernelNorm kernel_l54_norm(int n_theta = 24, int n_phi = 48, double radius = 1000.0);

// sup over the sample set of (1+|x|)^4 |K_vec(1,x)|; n_radii log-spaced radii
// per direction, n_dirs seeded directions plus axes and diagonals
double kernel_decay_constant(int n_radii = 400, int n_dirs = 16);

}  // namespace mhd

#endif
