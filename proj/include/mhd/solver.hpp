#ifndef MHD_SOLVER_HPP
#define MHD_SOLVER_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "mhd/noise.hpp"
#include "mhd/norms.hpp"
#include "mhd/operators.hpp"

namespace mhd {

// symmetrizing change of variables v = u + b, w = u - b
std::pair<SpectralVectorField, SpectralVectorField> elsasser_from_physical(
    const SpectralVectorField& u0, const SpectralVectorField& b0);
std::pair<SpectralVectorField, SpectralVectorField> physical_from_elsasser(
    const SpectralVectorField& v, const SpectralVectorField& w);

// loading transform G1 = P g1 + P g2, G2 = P g1 - P g2 and its inverse
std::pair<ForcingSequence, ForcingSequence> forcing_from_physical(const ForcingSequence& g1,
                                                                  const ForcingSequence& g2);
std::pair<ForcingSequence, ForcingSequence> physical_from_forcing(const ForcingSequence& G1,
                                                                  const ForcingSequence& G2);

// Frozen linear part of the mild equations on the grid of v0:
//   v1(t_n) = S(t_n; nu1) v0 + int_0^{t_n} S(t_n - s; nu1) G1 dw_s   (EM rule)
// and likewise w1 with (nu2, G2). Both convolutions ride the same Wiener
// increments. An empty forcing sequence means pure heat flow.
std::pair<FieldHistory, FieldHistory> linear_part(const SpectralVectorField& v0,
                                                  const SpectralVectorField& w0,
                                                  const ForcingSequence& G1,
                                                  const ForcingSequence& G2,
                                                  const NoiseRealization& noise);

struct PicardState {
    FieldHistory v_hist, w_hist;    // current iterates
    FieldHistory v1_hist, w1_hist;  // frozen linear parts
    int iter = 0;
    std::vector<double> diffs;  // ||(v,w) step difference|| per iteration
    NormTag working_norm = NormTag::X2;
};

struct ContractionReport {
    double epsilon = 0.0;     // ||(v1,w1)|| in the working norm (sum pairing)
    double c_estimate = 0.0;  // empirical bilinear constant feeding the gate
    double product = 0.0;     // 4 * epsilon * c_estimate
    bool converged = false;
    int iterations = 0;
    double final_residual = 0.0;  // last step difference relative to epsilon
    double ratio_max = 0.0;       // worst successive-diff ratio past the first
};

// Picard recursion v^{n+1} = v1 - B(w^n, v^n; nu1), w^{n+1} = w1 - B(v^n, w^n; nu2),
// starting from (v1, w1) unless an explicit start pair is supplied, stopping
// once the step difference falls below tol * ||(v1,w1)|| in the working norm
// (converged = false if max_iter hits first; the diffs trace is the
// divergence report). c_hat only feeds the report's gate product.
std::pair<PicardState, ContractionReport> picard_solve(const FieldHistory& v1,
                                                       const FieldHistory& w1, NormTag tag,
                                                       double tol = 1e-8, int max_iter = 50,
                                                       double c_hat = 0.0,
                                                       const FieldHistory* v_start = nullptr,
                                                       const FieldHistory* w_start = nullptr);

// Empirical lower bound on the bilinear constant over `samples` seeded random
// solenoidal history pairs: max of ||B(v,w)|| / (||v|| ||w||) with the X1 norm
// upstairs and X2 norms downstairs for NormTag::X2, and the pathwise
// space-time L5 norm throughout for NormTag::L5. Both viscosities of g are
// tried. Horizon g.T / step g.dt.
double estimate_bilinear_constant(const GridSpec& g, int samples, std::uint64_t seed,
                                  NormTag tag);

// Halve T starting from the realization's horizon (reusing the same Wiener
// path prefix) until ||(v1,w1)||_{[0,T]} < 1/(4 c_hat (1+margin)); returns the
// first passing T. NoLocalWindowError once T would drop below 4 dt.
double find_local_T0(const SpectralVectorField& v0, const SpectralVectorField& w0,
                     const ForcingSequence& G1, const ForcingSequence& G2,
                     const NoiseRealization& noise, double c_hat, NormTag tag,
                     double margin = 0.1);

// A priori smallness gate from data and forcing alone:
//   epsilon_hat = ||v0|| + ||G1||/sqrt(2 nu1) + ||w0|| + ||G2||/sqrt(2 nu2)
// with H^{1/2} data / H^{1/2}(l2) forcing norms for NormTag::X2 and
// H^{-2/5}_5 / H^{-1}_5(l2) for NormTag::L5. converged flags product < 1.
ContractionReport check_global_smallness(const SpectralVectorField& v0,
                                         const SpectralVectorField& w0,
                                         const ForcingSequence& G1, const ForcingSequence& G2,
                                         double c_hat, NormTag tag);

// pressure from the momentum balance: pi_hat(k) = -(k_i k_j/|k|^2) M_hat_ij
// with M the dealiased u (x) u - b (x) b tensor; mean-zero output
SpectralScalarField pressure_recovery(const SpectralVectorField& u,
                                      const SpectralVectorField& b);

// Sup-in-time H^{1/2} distances to the fixed-point equations
//   v - [v1 - B(w,v)],  w - [w1 - B(v,w)],
// evaluated with the solver's own trapezoid B: converged iterates sit at the
// Picard tolerance by construction.
std::pair<double, double> fixed_point_residual(const FieldHistory& v_hist,
                                               const FieldHistory& w_hist,
                                               const FieldHistory& v1_hist,
                                               const FieldHistory& w1_hist);

// Same distances against the refined (exponential-Simpson) Duhamel rule:
// exposes the production rule's O(dt^2) quadrature error, so halving dt
// shrinks it by about 4x.
std::pair<double, double> mild_residual(const FieldHistory& v_hist, const FieldHistory& w_hist,
                                        const FieldHistory& v1_hist,
                                        const FieldHistory& w1_hist);

}  // namespace mhd

#endif
