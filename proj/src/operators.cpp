#include "mhd/operators.hpp"

#include <fftw3.h>

#include <cmath>
#include <type_traits>

#include "mhd/error.hpp"
#include "mhd/transform.hpp"

namespace mhd {

SpectralVectorField leray_project(const SpectralVectorField& v) {
    SpectralVectorField out = v;
    for_each_mode(v.grid, [&](std::size_t idx, int k0, int k1, int k2) {
        const double kk = static_cast<double>(k0) * k0 + static_cast<double>(k1) * k1 +
                          static_cast<double>(k2) * k2;
        if (kk == 0.0) return;
        const cplx dot = (static_cast<double>(k0) * v.c[0][idx] +
                          static_cast<double>(k1) * v.c[1][idx] +
                          static_cast<double>(k2) * v.c[2][idx]) /
                         kk;
        out.c[0][idx] = v.c[0][idx] - static_cast<double>(k0) * dot;
        out.c[1][idx] = v.c[1][idx] - static_cast<double>(k1) * dot;
        out.c[2][idx] = v.c[2][idx] - static_cast<double>(k2) * dot;
    });
    return out;
}

namespace {

template <typename Field>
Field heat_apply(double t, double nu, const Field& f) {
    if (t < 0.0) throw DomainError("heat_propagate: negative time");
    Field out = f;
    const GridSpec& g = f.grid;
    for_each_mode(g, [&](std::size_t idx, int k0, int k1, int k2) {
        const double factor = std::exp(-nu * t * laplace_symbol(g, k0, k1, k2));
        if constexpr (std::is_same_v<Field, SpectralVectorField>) {
            for (int d = 0; d < 3; ++d) out.c[d][idx] *= factor;
        } else {
            out.c[idx] *= factor;
        }
    });
    return out;
}

template <typename Field>
Field frac_apply(double n, const Field& f) {
    const GridSpec& g = f.grid;
    if (n < 0.0) {
        const std::size_t zero = flat_index(g, 0, 0, 0);
        bool mean_free = true;
        if constexpr (std::is_same_v<Field, SpectralVectorField>) {
            for (int d = 0; d < 3; ++d) mean_free = mean_free && f.c[d][zero] == cplx(0.0, 0.0);
        } else {
            mean_free = f.c[zero] == cplx(0.0, 0.0);
        }
        if (!mean_free)
            throw SingularSymbolError("fractional_laplacian: negative order on nonzero mean");
    }
    Field out = f;
    for_each_mode(g, [&](std::size_t idx, int k0, int k1, int k2) {
        const double kk = laplace_symbol(g, k0, k1, k2);
        const double factor = kk == 0.0 ? 0.0 : std::pow(kk, 0.5 * n);
        if constexpr (std::is_same_v<Field, SpectralVectorField>) {
            for (int d = 0; d < 3; ++d) out.c[d][idx] *= factor;
        } else {
            out.c[idx] *= factor;
        }
    });
    return out;
}

}  // namespace

SpectralVectorField heat_propagate(double t, double nu, const SpectralVectorField& v) {
    return heat_apply(t, nu, v);
}
SpectralScalarField heat_propagate(double t, double nu, const SpectralScalarField& f) {
    return heat_apply(t, nu, f);
}
SpectralVectorField fractional_laplacian(double n, const SpectralVectorField& v) {
    return frac_apply(n, v);
}
SpectralScalarField fractional_laplacian(double n, const SpectralScalarField& f) {
    return frac_apply(n, f);
}

SpectralVectorField nonlinear_flux(const SpectralVectorField& u, const SpectralVectorField& v) {
    if (!u.grid.same_box(v.grid)) throw SizeMismatchError("nonlinear_flux: grid mismatch");
    const GridSpec& g = u.grid;
    const std::size_t n = g.point_count();
    const double inv_n = 1.0 / static_cast<double>(n);

    // physical samples of both inputs (dealiased copies keep the quadratic
    // products alias-free after the final truncation)
    std::array<std::vector<cplx>, 3> us, vs;
    SpectralVectorField ud = u, vd = v;
    dealias(ud);
    dealias(vd);
    for (int d = 0; d < 3; ++d) {
        us[d] = ud.c[d];
        fft3(g, us[d], FFTW_BACKWARD);
        vs[d] = vd.c[d];
        fft3(g, vs[d], FFTW_BACKWARD);
    }

    // w_j(k) = 2 pi i/L sum_i k_i T_ij(k), T_ij = u_i v_j
    SpectralVectorField out(g);
    std::vector<cplx> prod(n);
    const double s = 2.0 * M_PI / g.L;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            for (std::size_t p = 0; p < n; ++p)
                prod[p] = cplx(us[i][p].real() * vs[j][p].real(), 0.0);
            fft3(g, prod, FFTW_FORWARD);
            for_each_mode(g, [&](std::size_t idx, int k0, int k1, int k2) {
                const int ki = i == 0 ? k0 : (i == 1 ? k1 : k2);
                out.c[j][idx] += cplx(0.0, s * ki) * (prod[idx] * inv_n);
            });
        }
    }
    dealias(out);
    return leray_project(out);
}

namespace {

void heat_step_inplace(const GridSpec& g, double nu, double t, SpectralVectorField& f) {
    for_each_mode(g, [&](std::size_t idx, int k0, int k1, int k2) {
        const double factor = std::exp(-nu * t * laplace_symbol(g, k0, k1, k2));
        for (int d = 0; d < 3; ++d) f.c[d][idx] *= factor;
    });
}

// cubic Lagrange interpolation of the history at time index n - 1/2
SpectralVectorField interp_midpoint(const FieldHistory& h, std::size_t n) {
    const std::size_t M = h.M();
    // stencil {m, m+1, m+2, m+3} containing n-1 and n, clamped to the mesh
    std::size_t m = n >= 2 ? n - 2 : 0;
    if (m + 3 > M) m = M - 3;
    const double x = (static_cast<double>(n) - 0.5) - static_cast<double>(m);
    double w[4];
    w[0] = (x - 1.0) * (x - 2.0) * (x - 3.0) / -6.0;
    w[1] = x * (x - 2.0) * (x - 3.0) / 2.0;
    w[2] = x * (x - 1.0) * (x - 3.0) / -2.0;
    w[3] = x * (x - 1.0) * (x - 2.0) / 6.0;
    SpectralVectorField out(h.grid);
    for (int q = 0; q < 4; ++q) axpy(w[q], h.states[m + q], out);
    return out;
}

}  // namespace

FieldHistory bilinear_B(const FieldHistory& u, const FieldHistory& v, double nu) {
    if (!u.same_mesh(v)) throw SizeMismatchError("bilinear_B: mesh mismatch");
    const GridSpec& g = u.grid;
    const std::size_t M = u.M();
    const double dt = g.dt;

    FieldHistory out(g, M);
    SpectralVectorField acc(g);  // running B_n
    SpectralVectorField f_prev = nonlinear_flux(u.states[0], v.states[0]);
    for (std::size_t n = 1; n <= M; ++n) {
        axpy(0.5 * dt, f_prev, acc);
        heat_step_inplace(g, nu, dt, acc);
        SpectralVectorField f_cur = nonlinear_flux(u.states[n], v.states[n]);
        axpy(0.5 * dt, f_cur, acc);
        out.states[n] = acc;
        f_prev = std::move(f_cur);
    }
    return out;
}

FieldHistory bilinear_B_refined(const FieldHistory& u, const FieldHistory& v, double nu) {
    if (!u.same_mesh(v)) throw SizeMismatchError("bilinear_B_refined: mesh mismatch");
    const GridSpec& g = u.grid;
    const std::size_t M = u.M();
    if (M < 3) throw SizeMismatchError("bilinear_B_refined: need at least 3 steps");
    const double dt = g.dt;

    FieldHistory out(g, M);
    SpectralVectorField acc(g);
    SpectralVectorField f_prev = nonlinear_flux(u.states[0], v.states[0]);
    for (std::size_t n = 1; n <= M; ++n) {
        // S(dt) B + dt/6 (S(dt) f_{n-1} + 4 S(dt/2) f_{n-1/2} + f_n)
        axpy(dt / 6.0, f_prev, acc);
        heat_step_inplace(g, nu, dt, acc);

        SpectralVectorField f_mid =
            nonlinear_flux(interp_midpoint(u, n), interp_midpoint(v, n));
        heat_step_inplace(g, nu, 0.5 * dt, f_mid);
        axpy(4.0 * dt / 6.0, f_mid, acc);

        SpectralVectorField f_cur = nonlinear_flux(u.states[n], v.states[n]);
        axpy(dt / 6.0, f_cur, acc);
        out.states[n] = acc;
        f_prev = std::move(f_cur);
    }
    return out;
}

}  // namespace mhd
