#ifndef MHD_QUADRATURE_HPP
#define MHD_QUADRATURE_HPP

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace mhd {

// Adaptive Gauss-Kronrod 7-15 integration on [a, b]; *err receives the
// engine's error estimate when supplied.
template <typename F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-10, double* err = nullptr,
                 unsigned max_depth = 15) {
    double e = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        std::forward<F>(f), a, b, max_depth, rel_tol, &e);
    if (err) *err = e;
    return v;
}

}  // namespace mhd

#endif
