#include "mhd/transform.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

#include "mhd/error.hpp"

namespace mhd {

namespace {

// One pair of c2c plans per grid size. FFTW_ESTIMATE keeps planning
// deterministic (no timing feedback) and FFTW_UNALIGNED lets the plans run on
// any heap buffer through the new-array interface.
struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

std::mutex plan_mutex;

PlanPair& plans_for(int N) {
    static std::map<int, PlanPair> cache;
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto it = cache.find(N);
    if (it != cache.end()) return it->second;

    // plans must be created in-place because fft3 always executes them that
    // way; an out-of-place plan run with in == out silently corrupts data for
    // sizes whose codelets buffer through the output array
    std::vector<fftw_complex> scratch(static_cast<std::size_t>(N) * N * N);
    PlanPair p;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    p.fwd = fftw_plan_dft_3d(N, N, N, scratch.data(), scratch.data(),
                             FFTW_FORWARD, flags);
    p.bwd = fftw_plan_dft_3d(N, N, N, scratch.data(), scratch.data(),
                             FFTW_BACKWARD, flags);
    if (!p.fwd || !p.bwd) throw Error("fftw planning failed");
    return cache.emplace(N, p).first->second;
}

}  // namespace

void fft3(const GridSpec& g, std::vector<cplx>& data, int sign) {
    if (data.size() != g.point_count()) throw SizeMismatchError("fft3: wrong buffer size");
    PlanPair& p = plans_for(g.N);
    auto* raw = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(sign == FFTW_FORWARD ? p.fwd : p.bwd, raw, raw);
}

SpectralScalarField forward_transform(const GridSpec& g, const std::vector<double>& samples) {
    if (samples.size() != g.point_count())
        throw SizeMismatchError("forward_transform: samples do not match grid");
    SpectralScalarField out(g);
    out.c.resize(g.point_count());
    for (std::size_t i = 0; i < samples.size(); ++i) out.c[i] = cplx(samples[i], 0.0);
    fft3(g, out.c, FFTW_FORWARD);
    const double scale = 1.0 / static_cast<double>(g.point_count());
    for (auto& z : out.c) z *= scale;
    return out;
}

std::vector<double> inverse_transform(const SpectralScalarField& f) {
    std::vector<cplx> buf = f.c;
    fft3(f.grid, buf, FFTW_BACKWARD);
    double max_re = 0.0, max_im = 0.0;
    for (const auto& z : buf) {
        max_re = std::max(max_re, std::abs(z.real()));
        max_im = std::max(max_im, std::abs(z.imag()));
    }
    if (max_im > 1e-12 * std::max(max_re, 1e-300) && max_im > 1e-300)
        throw SymmetryError("inverse_transform: coefficients are not Hermitian");
    std::vector<double> out(buf.size());
    for (std::size_t i = 0; i < buf.size(); ++i) out[i] = buf[i].real();
    return out;
}

SpectralVectorField forward_transform(const GridSpec& g,
                                      const std::array<std::vector<double>, 3>& samples) {
    SpectralVectorField out(g);
    for (int d = 0; d < 3; ++d) out.c[d] = forward_transform(g, samples[d]).c;
    return out;
}

std::array<std::vector<double>, 3> inverse_transform(const SpectralVectorField& f) {
    std::array<std::vector<double>, 3> out;
    for (int d = 0; d < 3; ++d) {
        SpectralScalarField comp(f.grid);
        comp.c = f.c[d];
        out[d] = inverse_transform(comp);
    }
    return out;
}

SpectralScalarField apply_symbol(const SpectralScalarField& f,
                                 const std::function<cplx(const std::array<double, 3>&)>& m) {
    SpectralScalarField out(f.grid);
    out.c.assign(f.c.size(), cplx(0.0, 0.0));
    for_each_mode(f.grid, [&](std::size_t idx, int k0, int k1, int k2) {
        const cplx v = f.c[idx];
        const std::array<double, 3> xi = {k0 / f.grid.L, k1 / f.grid.L, k2 / f.grid.L};
        const cplx mv = m(xi);
        const bool finite = std::isfinite(mv.real()) && std::isfinite(mv.imag());
        if (!finite) {
            if (v != cplx(0.0, 0.0))
                throw SingularSymbolError("apply_symbol: singular symbol at an active mode");
            return;  // leave zero
        }
        out.c[idx] = mv * v;
    });
    return out;
}

namespace {

inline bool aliased(int N, int k0, int k1, int k2) {
    return 3 * std::abs(k0) >= N || 3 * std::abs(k1) >= N || 3 * std::abs(k2) >= N;
}

}  // namespace

void dealias(SpectralScalarField& f) {
    for_each_mode(f.grid, [&](std::size_t idx, int k0, int k1, int k2) {
        if (aliased(f.grid.N, k0, k1, k2)) f.c[idx] = cplx(0.0, 0.0);
    });
}

void dealias(SpectralVectorField& f) {
    for_each_mode(f.grid, [&](std::size_t idx, int k0, int k1, int k2) {
        if (aliased(f.grid.N, k0, k1, k2))
            for (int d = 0; d < 3; ++d) f.c[d][idx] = cplx(0.0, 0.0);
    });
}

}  // namespace mhd
