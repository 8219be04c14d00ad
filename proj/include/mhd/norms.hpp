#ifndef MHD_NORMS_HPP
#define MHD_NORMS_HPP

#include <string>
#include <vector>

#include "mhd/fields.hpp"

namespace mhd {

/*--------------------------------------------------------------------------
 * Homogeneous Sobolev norms.
 *
 * p = 2 is fully quadratic (Plancherel, all components inside the root):
 *     ||v||_{H^n_2} = ( L^3 sum_k |2 pi k/L|^{2n} |v_hat(k)|^2_{C^3} )^{1/2}
 * which is the convention that makes the semigroup smoothing identity and
 * the interpolation inequality exact mode-wise.
 *
 * p != 2 follows the component-sum convention:
 *     ||v||_{H^n_p} = sum_i || (-Lap)^{n/2} v^i ||_{L_p}
 * with the L_p norm by grid quadrature ((L^3/N^3) sum_x |.|^p)^{1/p}.
 * Supported p: 2, 5/2, 5, 3/2, 6, 4.
 *-------------------------------------------------------------------------*/
double sobolev_norm(const SpectralVectorField& v, double n, double p);
double sobolev_norm(const SpectralScalarField& f, double n, double p);

// sequence norm over the Wiener directions: p = 2 quadratic over (kappa,
// component, mode); p != 2 pointwise l2 over kappa, then L_p, summed over
// components
double sobolev_norm(const ForcingSequence& G, double n, double p);

struct PerTimeNorms {
    double t;
    double H12;  // H^{1/2}_2
    double H32;  // H^{3/2}_2
    double H1;   // H^1_2
    double L5;   // L_5 spatial
};

// Space-time norms of a trajectory. Time integrals use the trapezoid rule on
// the mesh; sup is the mesh sup.
struct NormReport {
    double sup_H12 = 0.0;       // sup_t ||.||_{H^{1/2}}
    double l2t_H32 = 0.0;       // L^2_t H^{3/2}
    double l4t_H1 = 0.0;        // L^4_t H^1
    double l5_spacetime = 0.0;  // L_5((0,T) x box)
    std::vector<PerTimeNorms> per_time;

    double X1() const { return sup_H12 + l2t_H32; }
    double X2() const { return l4t_H1; }
};

NormReport spacetime_norms(const FieldHistory& hist);

// contraction gate norms: X2 = L^4_t H^1, L5 = pathwise space-time L_5
enum class NormTag { X2, L5 };

// only the tagged norm of the trajectory (cheaper than a full report)
double working_norm(const FieldHistory& hist, NormTag tag);

// l4t_H1 / sqrt(sup_H12 * l2t_H32); <= 1 up to rounding by mode-wise
// Cauchy-Schwarz under the shared trapezoid weights. Zero denominator is an
// error.
double interpolation_gap(const FieldHistory& hist);

struct MonteCarloNorm {
    double value;
    double stderr_;
};

// Monte Carlo p-th moment norm: (mean of values^p)^{1/p} with a delta-method
// standard error. Requires at least two entries.
MonteCarloNorm expectation_norm(const std::vector<double>& values, double p);

// CSV serialization (RFC 4180, CRLF, 17 significant digits):
// header t,H12,H32,H1,L5 then one row per mesh time.
std::string norm_report_csv(const NormReport& report);

}  // namespace mhd

#endif
