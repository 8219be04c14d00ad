#ifndef MHD_TRANSFORM_HPP
#define MHD_TRANSFORM_HPP

#include <functional>
#include <vector>

#include "mhd/spectral_field.hpp"

namespace mhd {

/*--------------------------------------------------------------------------
 * Discrete Fourier transforms on the periodic box.
 *
 * Conventions (used by every multiplier in the library):
 *   forward:  f_hat(k) = N^-3 sum_j f(x_j) exp(-2 pi i k.j / N),  x_j = L j/N
 *   inverse:  f(x_j)   = sum_k f_hat(k) exp(+2 pi i k.j / N)
 * so a physical-space sample and its coefficients satisfy Parseval in the
 * form L^3 sum_k |f_hat|^2 = (L^3/N^3) sum_j |f(x_j)|^2.
 *-------------------------------------------------------------------------*/

// samples: N^3 real values, row major. Throws SizeMismatchError on bad size.
SpectralScalarField forward_transform(const GridSpec& g, const std::vector<double>& samples);

// Inverse transform to real samples. The imaginary residue must stay below
// 1e-12 relative to the field magnitude, else SymmetryError; the residue is
// discarded from the returned values.
std::vector<double> inverse_transform(const SpectralScalarField& f);

// component-wise wrappers
SpectralVectorField forward_transform(const GridSpec& g,
                                      const std::array<std::vector<double>, 3>& samples);
std::array<std::vector<double>, 3> inverse_transform(const SpectralVectorField& f);

// Unnormalized c2c transforms used by the operator kernels (no symmetry
// checks, no 1/N^3: callers own the normalization).
void fft3(const GridSpec& g, std::vector<cplx>& data, int sign);

// Multiply coefficients by m(xi), xi = k/L. A non-finite symbol value at a
// mode with a nonzero coefficient raises SingularSymbolError; at modes with
// zero coefficient the output stays zero.
SpectralScalarField apply_symbol(const SpectralScalarField& f,
                                 const std::function<cplx(const std::array<double, 3>&)>& m);

// 2/3-rule dealiasing: zero every mode with 3|k_i| >= N for some axis i.
void dealias(SpectralScalarField& f);
void dealias(SpectralVectorField& f);

}  // namespace mhd

#endif
