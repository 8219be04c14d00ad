#ifndef MHD_SPECTRAL_FIELD_HPP
#define MHD_SPECTRAL_FIELD_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "mhd/grid.hpp"

namespace mhd {

using cplx = std::complex<double>;

// Fourier coefficients f_hat(k) of a real scalar field on the box, stored in
// FFTW row-major layout: entry (i0*N + i1)*N + i2 holds the mode
// k = (wavenumber(i0), wavenumber(i1), wavenumber(i2)).
struct SpectralScalarField {
    GridSpec grid;
    std::vector<cplx> c;

    SpectralScalarField() = default;
    explicit SpectralScalarField(const GridSpec& g) : grid(g), c(g.point_count()) {}

    cplx& at(int i0, int i1, int i2) { return c[flat_index(grid, i0, i1, i2)]; }
    const cplx& at(int i0, int i1, int i2) const { return c[flat_index(grid, i0, i1, i2)]; }
};

// Three-component vector field in the same layout.
struct SpectralVectorField {
    GridSpec grid;
    std::array<std::vector<cplx>, 3> c;

    SpectralVectorField() = default;
    explicit SpectralVectorField(const GridSpec& g) : grid(g) {
        for (auto& comp : c) comp.assign(g.point_count(), cplx(0.0, 0.0));
    }

    std::size_t size() const { return c[0].size(); }

    SpectralVectorField& operator+=(const SpectralVectorField& o) {
        for (int d = 0; d < 3; ++d)
            for (std::size_t i = 0; i < c[d].size(); ++i) c[d][i] += o.c[d][i];
        return *this;
    }
    SpectralVectorField& operator-=(const SpectralVectorField& o) {
        for (int d = 0; d < 3; ++d)
            for (std::size_t i = 0; i < c[d].size(); ++i) c[d][i] -= o.c[d][i];
        return *this;
    }
    SpectralVectorField& operator*=(double a) {
        for (auto& comp : c)
            for (auto& z : comp) z *= a;
        return *this;
    }
};

inline SpectralVectorField operator+(SpectralVectorField a, const SpectralVectorField& b) {
    a += b;
    return a;
}
inline SpectralVectorField operator-(SpectralVectorField a, const SpectralVectorField& b) {
    a -= b;
    return a;
}
inline SpectralVectorField operator*(double s, SpectralVectorField a) {
    a *= s;
    return a;
}

// y += a*x
inline void axpy(double a, const SpectralVectorField& x, SpectralVectorField& y) {
    for (int d = 0; d < 3; ++d)
        for (std::size_t i = 0; i < y.c[d].size(); ++i) y.c[d][i] += a * x.c[d][i];
}

// Visit every mode: f(flat, k0, k1, k2).
template <typename F>
inline void for_each_mode(const GridSpec& g, F&& f) {
    std::size_t idx = 0;
    for (int i0 = 0; i0 < g.N; ++i0) {
        const int k0 = g.wavenumber(i0);
        for (int i1 = 0; i1 < g.N; ++i1) {
            const int k1 = g.wavenumber(i1);
            for (int i2 = 0; i2 < g.N; ++i2, ++idx) {
                f(idx, k0, k1, g.wavenumber(i2));
            }
        }
    }
}

// max |f_hat(-k) - conj(f_hat(k))| over all modes, relative to the largest
// coefficient magnitude; 0 for the zero field
double hermitian_defect(const SpectralScalarField& f);
double hermitian_defect(const SpectralVectorField& f);

double max_abs(const SpectralScalarField& f);
double max_abs(const SpectralVectorField& f);

// largest coefficient difference between two fields (same grid assumed)
double max_abs_diff(const SpectralVectorField& a, const SpectralVectorField& b);

}  // namespace mhd

#endif
