#include "doctest.h"

#include <cmath>
#include <string>

#include "mhd/csv.hpp"
#include "mhd/error.hpp"
#include "mhd/norms.hpp"
#include "mhd/operators.hpp"
#include "mhd/transform.hpp"

using namespace mhd;

namespace {

std::size_t midx(const GridSpec& g, int k0, int k1, int k2) {
    auto w = [&](int k) { return (k + g.N) % g.N; };
    return flat_index(g, w(k0), w(k1), w(k2));
}

}  // namespace

TEST_CASE("quadratic Sobolev norms of a single mode are analytic") {
    GridSpec g;
    g.N = 16;
    g.L = 2.5;
    SpectralVectorField v(g);
    const cplx a(0.3, -0.1);
    v.c[2][midx(g, 1, 2, 0)] = a;
    v.c[2][midx(g, -1, -2, 0)] = std::conj(a);
    const double kabs = 2.0 * M_PI * std::sqrt(5.0) / g.L;
    for (double n : {0.0, 0.5, 1.0, 1.5, -0.4}) {
        const double want = std::sqrt(2.0 * g.L * g.L * g.L * std::norm(a) *
                                      std::pow(kabs, 2.0 * n));
        const double got = sobolev_norm(v, n, 2.0);
        CHECK(std::abs(got - want) < 1e-12 * want);
    }
}

TEST_CASE("L5 norm of a constant field matches the closed form") {
    GridSpec g;
    g.N = 8;
    g.L = 1.7;
    SpectralVectorField v(g);
    v.c[0][midx(g, 0, 0, 0)] = 2.25;  // constant field (2.25, 0, 0)
    const double want = 2.25 * std::pow(g.L, 3.0 / 5.0);
    CHECK(std::abs(sobolev_norm(v, 0.0, 5.0) - want) < 1e-13 * want);

    // two constant components: the component-sum convention adds the L5 norms
    v.c[1][midx(g, 0, 0, 0)] = 1.0;
    const double want2 = (2.25 + 1.0) * std::pow(g.L, 3.0 / 5.0);
    CHECK(std::abs(sobolev_norm(v, 0.0, 5.0) - want2) < 1e-13 * want2);
}

TEST_CASE("unsupported exponents and singular negative orders are rejected") {
    GridSpec g;
    g.N = 8;
    auto v = random_solenoidal(g, 7, 1.0, 2);
    CHECK_THROWS_AS((void)sobolev_norm(v, 0.0, 3.0), UnsupportedError);
    SpectralVectorField m(g);
    m.c[0][midx(g, 0, 0, 0)] = 0.5;
    CHECK_THROWS_AS((void)sobolev_norm(m, -0.5, 2.0), SingularSymbolError);
    // mean-free fields take negative orders fine
    CHECK(sobolev_norm(v, -0.4, 2.0) > 0.0);
}

TEST_CASE("space-time report matches a hand trapezoid sum") {
    GridSpec g;
    g.N = 8;
    g.dt = 0.125;
    const std::size_t M = 6;
    auto base = random_solenoidal(g, 17, 1.0, 2);
    FieldHistory h(g, M);
    for (std::size_t n = 0; n <= M; ++n) h.states[n] = heat_propagate(h.time(n), 0.6, base);
    auto rep = spacetime_norms(h);
    REQUIRE(rep.per_time.size() == M + 1);

    double sup = 0.0, i2 = 0.0, i4 = 0.0, i5 = 0.0;
    for (std::size_t n = 0; n <= M; ++n) {
        const double w = (n == 0 || n == M) ? 0.5 * g.dt : g.dt;
        const double h12 = sobolev_norm(h.states[n], 0.5, 2.0);
        const double h32 = sobolev_norm(h.states[n], 1.5, 2.0);
        const double h1 = sobolev_norm(h.states[n], 1.0, 2.0);
        const double l5 = sobolev_norm(h.states[n], 0.0, 5.0);
        CHECK(rep.per_time[n].t == h.time(n));
        CHECK(std::abs(rep.per_time[n].H12 - h12) < 1e-14 * (1.0 + h12));
        sup = std::max(sup, h12);
        i2 += w * h32 * h32;
        i4 += w * std::pow(h1, 4.0);
        i5 += w * std::pow(l5, 5.0);
    }
    CHECK(std::abs(rep.sup_H12 - sup) < 1e-14 * sup);
    CHECK(std::abs(rep.l2t_H32 - std::sqrt(i2)) < 1e-13 * rep.l2t_H32);
    CHECK(std::abs(rep.l4t_H1 - std::pow(i4, 0.25)) < 1e-13 * rep.l4t_H1);
    CHECK(std::abs(rep.l5_spacetime - std::pow(i5, 0.2)) < 1e-13 * rep.l5_spacetime);
    CHECK(std::abs(working_norm(h, NormTag::X2) - rep.X2()) == 0.0);
    CHECK(std::abs(working_norm(h, NormTag::L5) - rep.l5_spacetime) == 0.0);
}

TEST_CASE("interpolation gap never exceeds one") {
    GridSpec g;
    g.N = 8;
    g.dt = 1.0 / 16.0;
    auto base = random_solenoidal(g, 23, 1.0, 2);
    FieldHistory h(g, 12);
    for (std::size_t n = 0; n <= 12; ++n) h.states[n] = heat_propagate(h.time(n), 1.1, base);
    const double gap = interpolation_gap(h);
    CHECK(gap <= 1.0 + 1e-12);
    CHECK(gap > 0.0);

    FieldHistory zero(g, 4);
    CHECK_THROWS_AS((void)interpolation_gap(zero), DomainError);
}

TEST_CASE("Monte Carlo moment norm") {
    MonteCarloNorm mc = expectation_norm({2.0, 2.0, 2.0}, 2.0);
    CHECK(mc.value == 2.0);
    CHECK(mc.stderr_ == 0.0);

    // values {1,3}, p = 2: sqrt((1+9)/2) = sqrt 5
    mc = expectation_norm({1.0, 3.0}, 2.0);
    CHECK(std::abs(mc.value - std::sqrt(5.0)) < 1e-15);
    // delta method: se(mean of squares) = 4 (sample sd of {1,9} over sqrt 2),
    // then divided by p * value^{p-1} = 2 sqrt 5
    const double se_m = 4.0 / std::sqrt(2.0) * std::sqrt(2.0);  // sd of {1,9} = 4 sqrt 2
    CHECK(std::abs(mc.stderr_ - se_m / (2.0 * std::sqrt(5.0))) < 1e-12);

    CHECK_THROWS_AS((void)expectation_norm({1.0}, 2.0), DomainError);
}

TEST_CASE("norm report CSV is RFC 4180 with 17 significant digits") {
    NormReport rep;
    rep.per_time.push_back({0.0, 1.0 / 3.0, 0.0, 0.0, 0.0});
    const std::string text = norm_report_csv(rep);
    CHECK(text.find("t,H12,H32,H1,L5\r\n") == 0);
    CHECK(text.find("0.33333333333333331") != std::string::npos);
    CHECK(text.rfind("\r\n") == text.size() - 2);

    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("q\"q") == "\"q\"\"q\"");
    CHECK(fmt_g17(0.1) == "0.10000000000000001");
}
