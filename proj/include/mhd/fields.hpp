#ifndef MHD_FIELDS_HPP
#define MHD_FIELDS_HPP

#include <cstdint>
#include <vector>

#include "mhd/spectral_field.hpp"

namespace mhd {

// divergence coefficients: 2 pi i (k/L) . v_hat(k)
SpectralScalarField divergence(const SpectralVectorField& v);

// Scale-free solenoidality defect: max_k |k.v_hat(k)| / max_k (|k||v_hat(k)|),
// 0 for fields with no active mode. Evolved fields must stay below 1e-10.
double divergence_rel(const SpectralVectorField& v);

// Random divergence-free test field. Mode amplitudes are exactly
// amplitude*(1+|k|)^-sigma over 0 < |k| <= kmax with a seeded random
// direction per mode; draws are keyed by (seed, k), so the same seed yields
// the same physical field on every grid size that can hold kmax.
// Requires kmax < N/3.
SpectralVectorField random_solenoidal(const GridSpec& g, std::uint64_t seed, double sigma,
                                      int kmax, double amplitude = 1.0);

// Finite family {G^kappa} of divergence-free loading fields (the Wiener
// directions' coefficients). Piecewise-constant-in-time forcing uses one
// sequence per time step.
struct ForcingSequence {
    std::vector<SpectralVectorField> members;

    std::size_t K() const { return members.size(); }
    bool empty() const { return members.empty(); }
};

ForcingSequence random_forcing(const GridSpec& g, std::uint64_t seed, std::size_t K,
                               double sigma, int kmax, double amplitude);

// worst divergence_rel over the members
double divergence_rel(const ForcingSequence& G);

// Uniform-mesh trajectory t_n = n*dt, n = 0..M.
struct FieldHistory {
    GridSpec grid;
    std::vector<SpectralVectorField> states;

    FieldHistory() = default;
    FieldHistory(const GridSpec& g, std::size_t M) : grid(g) {
        states.assign(M + 1, SpectralVectorField(g));
    }

    std::size_t M() const { return states.empty() ? 0 : states.size() - 1; }
    double time(std::size_t n) const { return grid.dt * static_cast<double>(n); }
    bool same_mesh(const FieldHistory& o) const {
        return grid.same_mesh(o.grid) && states.size() == o.states.size();
    }
};

double divergence_rel(const FieldHistory& h);
double max_abs_diff(const FieldHistory& a, const FieldHistory& b);

}  // namespace mhd

#endif
