#include "mhd/norms.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>

#include "mhd/error.hpp"
#include "mhd/transform.hpp"

namespace mhd {

namespace {

bool p_supported(double p) {
    for (double q : {2.0, 2.5, 5.0, 1.5, 6.0, 4.0})
        if (std::abs(p - q) < 1e-12) return true;
    return false;
}

// weight |2 pi k/L|^{2n} with the k = 0 conventions (1 for n = 0, else 0)
inline double weight(double kk, double n) {
    if (kk == 0.0) return n == 0.0 ? 1.0 : 0.0;
    return std::pow(kk, n);
}

void require_mean_zero_if_negative(double n, bool mean_zero, const char* who) {
    if (n < 0.0 && !mean_zero)
        throw SingularSymbolError(std::string(who) + ": negative order on nonzero mean");
}

double lp_of_samples(const GridSpec& g, const std::vector<double>& s, double p) {
    double acc = 0.0;
    for (double x : s) acc += std::pow(std::abs(x), p);
    const double cell = (g.L * g.L * g.L) / static_cast<double>(g.point_count());
    return std::pow(cell * acc, 1.0 / p);
}

}  // namespace

double sobolev_norm(const SpectralVectorField& v, double n, double p) {
    if (!p_supported(p)) throw UnsupportedError("sobolev_norm: unsupported p");
    const GridSpec& g = v.grid;
    const std::size_t zero = flat_index(g, 0, 0, 0);
    const bool mean_zero = v.c[0][zero] == cplx(0.0, 0.0) && v.c[1][zero] == cplx(0.0, 0.0) &&
                           v.c[2][zero] == cplx(0.0, 0.0);
    require_mean_zero_if_negative(n, mean_zero, "sobolev_norm");

    if (std::abs(p - 2.0) < 1e-12) {
        double acc = 0.0;
        for_each_mode(g, [&](std::size_t idx, int k0, int k1, int k2) {
            const double kk = laplace_symbol(g, k0, k1, k2);
            const double mag2 = std::norm(v.c[0][idx]) + std::norm(v.c[1][idx]) +
                                std::norm(v.c[2][idx]);
            acc += weight(kk, n) * mag2;
        });
        return std::sqrt(g.L * g.L * g.L * acc);
    }

    double total = 0.0;
    for (int d = 0; d < 3; ++d) {
        std::vector<cplx> buf(v.c[d].size());
        for_each_mode(g, [&](std::size_t idx, int k0, int k1, int k2) {
            const double kk = laplace_symbol(g, k0, k1, k2);
            const double m = kk == 0.0 ? (n == 0.0 ? 1.0 : 0.0) : std::pow(kk, 0.5 * n);
            buf[idx] = m * v.c[d][idx];
        });
        fft3(g, buf, FFTW_BACKWARD);
        std::vector<double> samples(buf.size());
        for (std::size_t i = 0; i < buf.size(); ++i) samples[i] = buf[i].real();
        total += lp_of_samples(g, samples, p);
    }
    return total;
}

double sobolev_norm(const SpectralScalarField& f, double n, double p) {
    SpectralVectorField v(f.grid);
    v.c[0] = f.c;
    // components 2,3 stay zero; the component-sum and quadratic conventions
    // then agree with the scalar norm
    return sobolev_norm(v, n, p);
}

double sobolev_norm(const ForcingSequence& G, double n, double p) {
    if (G.empty()) return 0.0;
    if (!p_supported(p)) throw UnsupportedError("sobolev_norm: unsupported p");
    const GridSpec& g = G.members[0].grid;

    if (std::abs(p - 2.0) < 1e-12) {
        double acc = 0.0;
        for (const auto& m : G.members) {
            const double s = sobolev_norm(m, n, 2.0);
            acc += s * s;
        }
        return std::sqrt(acc);
    }

    double total = 0.0;
    for (int d = 0; d < 3; ++d) {
        std::vector<double> l2mag(g.point_count(), 0.0);
        for (const auto& member : G.members) {
            std::vector<cplx> buf(member.c[d].size());
            for_each_mode(g, [&](std::size_t idx, int k0, int k1, int k2) {
                const double kk = laplace_symbol(g, k0, k1, k2);
                const double m = kk == 0.0 ? (n == 0.0 ? 1.0 : 0.0) : std::pow(kk, 0.5 * n);
                buf[idx] = m * member.c[d][idx];
            });
            require_mean_zero_if_negative(n, member.c[d][flat_index(g, 0, 0, 0)] == cplx(0.0, 0.0),
                                          "sobolev_norm(sequence)");
            fft3(g, buf, FFTW_BACKWARD);
            for (std::size_t i = 0; i < buf.size(); ++i)
                l2mag[i] += buf[i].real() * buf[i].real();
        }
        for (auto& x : l2mag) x = std::sqrt(x);
        total += lp_of_samples(g, l2mag, p);
    }
    return total;
}

namespace {

// H^{1/2}, H^1, H^{3/2} of one state in a single mode sweep
struct P2Triple {
    double h12, h1, h32;
};

P2Triple p2_norms(const SpectralVectorField& v) {
    const GridSpec& g = v.grid;
    double a12 = 0.0, a1 = 0.0, a32 = 0.0;
    for_each_mode(g, [&](std::size_t idx, int k0, int k1, int k2) {
        const double kk = laplace_symbol(g, k0, k1, k2);
        if (kk == 0.0) return;
        const double mag2 =
            std::norm(v.c[0][idx]) + std::norm(v.c[1][idx]) + std::norm(v.c[2][idx]);
        const double r = std::sqrt(kk);
        a12 += r * mag2;
        a1 += kk * mag2;
        a32 += r * kk * mag2;
    });
    const double vol = g.L * g.L * g.L;
    return {std::sqrt(vol * a12), std::sqrt(vol * a1), std::sqrt(vol * a32)};
}

}  // namespace

NormReport spacetime_norms(const FieldHistory& hist) {
    if (hist.states.empty()) throw SizeMismatchError("spacetime_norms: empty history");
    NormReport rep;
    const std::size_t M = hist.M();
    const double dt = hist.grid.dt;
    double i2 = 0.0, i4 = 0.0, i5 = 0.0;
    rep.per_time.reserve(M + 1);
    for (std::size_t n = 0; n <= M; ++n) {
        const auto t3 = p2_norms(hist.states[n]);
        const double l5 = sobolev_norm(hist.states[n], 0.0, 5.0);
        rep.per_time.push_back({hist.time(n), t3.h12, t3.h32, t3.h1, l5});
        rep.sup_H12 = std::max(rep.sup_H12, t3.h12);
        const double w = (n == 0 || n == M) ? 0.5 * dt : dt;
        i2 += w * t3.h32 * t3.h32;
        i4 += w * t3.h1 * t3.h1 * t3.h1 * t3.h1;
        i5 += w * std::pow(l5, 5.0);
    }
    rep.l2t_H32 = std::sqrt(i2);
    rep.l4t_H1 = std::pow(i4, 0.25);
    rep.l5_spacetime = std::pow(i5, 0.2);
    return rep;
}

double working_norm(const FieldHistory& hist, NormTag tag) {
    if (hist.states.empty()) throw SizeMismatchError("working_norm: empty history");
    const std::size_t M = hist.M();
    const double dt = hist.grid.dt;
    double acc = 0.0;
    for (std::size_t n = 0; n <= M; ++n) {
        const double w = (n == 0 || n == M) ? 0.5 * dt : dt;
        if (tag == NormTag::X2) {
            const double h1 = p2_norms(hist.states[n]).h1;
            acc += w * h1 * h1 * h1 * h1;
        } else {
            acc += w * std::pow(sobolev_norm(hist.states[n], 0.0, 5.0), 5.0);
        }
    }
    return tag == NormTag::X2 ? std::pow(acc, 0.25) : std::pow(acc, 0.2);
}

double interpolation_gap(const FieldHistory& hist) {
    const NormReport rep = spacetime_norms(hist);
    const double denom = std::sqrt(rep.sup_H12) * std::sqrt(rep.l2t_H32);
    if (denom == 0.0) throw DomainError("interpolation_gap: zero history");
    return rep.l4t_H1 / denom;
}

MonteCarloNorm expectation_norm(const std::vector<double>& values, double p) {
    if (values.size() < 2) throw DomainError("expectation_norm: need at least 2 realizations");
    const double R = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += std::pow(v, p);
    mean /= R;
    double var = 0.0;
    for (double v : values) {
        const double d = std::pow(v, p) - mean;
        var += d * d;
    }
    var /= (R - 1.0);
    const double se_mean = std::sqrt(var / R);
    if (mean == 0.0) return {0.0, 0.0};
    const double value = std::pow(mean, 1.0 / p);
    const double se = (1.0 / p) * std::pow(mean, 1.0 / p - 1.0) * se_mean;
    return {value, se};
}

std::string norm_report_csv(const NormReport& report) {
    std::string out = "t,H12,H32,H1,L5\r\n";
    char buf[512];
    for (const auto& row : report.per_time) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\r\n", row.t, row.H12,
                      row.H32, row.H1, row.L5);
        out += buf;
    }
    return out;
}

}  // namespace mhd
