#ifndef MHD_OPERATORS_HPP
#define MHD_OPERATORS_HPP

#include "mhd/fields.hpp"
#include "mhd/spectral_field.hpp"

namespace mhd {

// Leray projection, mode-wise u_hat - k (k.u_hat)/|k|^2; the k = 0 mode
// passes through unchanged.
SpectralVectorField leray_project(const SpectralVectorField& v);

// Heat semigroup S(t) = e^{nu t Laplacian}: multiply by e^{-nu t |2 pi k/L|^2}.
// Negative t is rejected.
SpectralVectorField heat_propagate(double t, double nu, const SpectralVectorField& v);
SpectralScalarField heat_propagate(double t, double nu, const SpectralScalarField& f);

// (-Laplacian)^{n/2}: multiply by |2 pi k/L|^n, k = 0 stays zero. Negative n
// on a field with a nonzero mean raises SingularSymbolError.
SpectralVectorField fractional_laplacian(double n, const SpectralVectorField& v);
SpectralScalarField fractional_laplacian(double n, const SpectralScalarField& f);

// Projected nonlinear flux P div(u (x) v): pointwise tensor product in
// physical space, spectral divergence contraction, 2/3-rule dealiasing, then
// Leray projection. Bilinear in (u, v).
SpectralVectorField nonlinear_flux(const SpectralVectorField& u, const SpectralVectorField& v);

// Duhamel integral B(u,v)(t) = int_0^t S(t-s) P div(u (x) v)(s) ds by the
// exponential-trapezoid recursion
//   B_0 = 0,  B_n = S(dt)(B_{n-1} + dt/2 f_{n-1}) + dt/2 f_n,
// f_j the flux at t_j. Second order in dt; divergence-free at every step.
FieldHistory bilinear_B(const FieldHistory& u, const FieldHistory& v, double nu);

// Same integral by an exponential-Simpson rule with midpoint fluxes taken
// from cubic interpolation of the input histories. Used as the refined
// reference when measuring the production rule's quadrature error.
FieldHistory bilinear_B_refined(const FieldHistory& u, const FieldHistory& v, double nu);

}  // namespace mhd

#endif
