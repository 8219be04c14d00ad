#include "mhd/spectral_field.hpp"

#include <cmath>

namespace mhd {

namespace {

double defect_one(const GridSpec& g, const std::vector<cplx>& c) {
    double worst = 0.0;
    for (int i0 = 0; i0 < g.N; ++i0) {
        const int j0 = (g.N - i0) % g.N;
        for (int i1 = 0; i1 < g.N; ++i1) {
            const int j1 = (g.N - i1) % g.N;
            for (int i2 = 0; i2 < g.N; ++i2) {
                const int j2 = (g.N - i2) % g.N;
                const cplx a = c[flat_index(g, i0, i1, i2)];
                const cplx b = c[flat_index(g, j0, j1, j2)];
                worst = std::max(worst, std::abs(b - std::conj(a)));
            }
        }
    }
    return worst;
}

}  // namespace

double max_abs(const SpectralScalarField& f) {
    double m = 0.0;
    for (const auto& z : f.c) m = std::max(m, std::abs(z));
    return m;
}

double max_abs(const SpectralVectorField& f) {
    double m = 0.0;
    for (const auto& comp : f.c)
        for (const auto& z : comp) m = std::max(m, std::abs(z));
    return m;
}

double hermitian_defect(const SpectralScalarField& f) {
    const double scale = max_abs(f);
    if (scale == 0.0) return 0.0;
    return defect_one(f.grid, f.c) / scale;
}

double hermitian_defect(const SpectralVectorField& f) {
    const double scale = max_abs(f);
    if (scale == 0.0) return 0.0;
    double worst = 0.0;
    for (const auto& comp : f.c) worst = std::max(worst, defect_one(f.grid, comp));
    return worst / scale;
}

double max_abs_diff(const SpectralVectorField& a, const SpectralVectorField& b) {
    double m = 0.0;
    for (int d = 0; d < 3; ++d)
        for (std::size_t i = 0; i < a.c[d].size(); ++i)
            m = std::max(m, std::abs(a.c[d][i] - b.c[d][i]));
    return m;
}

}  // namespace mhd
