#ifndef MHD_GRID_HPP
#define MHD_GRID_HPP

#include <array>
#include <cmath>
#include <cstddef>

#include "mhd/error.hpp"

namespace mhd {

// Periodic cube of side L sampled on an N^3 lattice, plus the time mesh and
// the two dissipation coefficients. Frequencies run over
// {k in Z^3 : -N/2 <= k_i < N/2}; the physical frequency is xi = k/L and all
// Fourier multipliers are functions of 2*pi*k/L.
struct GridSpec {
    int N = 32;
    double L = 2.0 * M_PI;
    double dt = 1.0 / 256.0;
    double T = 1.0;
    double nu1 = 1.0;
    double nu2 = 1.0;

    void validate() const {
        if (N < 8 || N % 2 != 0) throw DomainError("GridSpec: N must be even and >= 8");
        if (!(L > 0.0)) throw DomainError("GridSpec: L must be positive");
        if (!(dt > 0.0) || !(T > 0.0) || dt > T)
            throw DomainError("GridSpec: need 0 < dt <= T");
        if (!(nu1 > 0.0) || !(nu2 > 0.0))
            throw DomainError("GridSpec: viscosities must be positive");
    }

    std::size_t point_count() const {
        return static_cast<std::size_t>(N) * N * N;
    }

    // storage index i in [0,N) -> signed frequency k in [-N/2, N/2)
    int wavenumber(int i) const { return i < N / 2 ? i : i - N; }

    // number of time steps on [0, T]
    std::size_t steps() const {
        return static_cast<std::size_t>(std::llround(T / dt));
    }

    bool same_box(const GridSpec& o) const { return N == o.N && L == o.L; }
    bool same_mesh(const GridSpec& o) const {
        return same_box(o) && dt == o.dt && T == o.T;
    }
};

// flattened index of lattice site / mode (i0,i1,i2), row-major
inline std::size_t flat_index(const GridSpec& g, int i0, int i1, int i2) {
    return (static_cast<std::size_t>(i0) * g.N + i1) * g.N + i2;
}

// |2 pi k / L|^2 for integer frequency vector k
inline double laplace_symbol(const GridSpec& g, int k0, int k1, int k2) {
    const double s = 2.0 * M_PI / g.L;
    return s * s * (static_cast<double>(k0) * k0 + static_cast<double>(k1) * k1 +
                    static_cast<double>(k2) * k2);
}

}  // namespace mhd

#endif
