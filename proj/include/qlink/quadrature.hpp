#pragma once

#include <complex>
#include <functional>

namespace qlink {

struct QuadOptions {
    double abs_tol = 1e-8;   // absolute tolerance on the integral
    int max_panels = 1 << 14;
};

struct QuadResult {
    std::complex<double> value{0.0, 0.0};
    double error = 0.0;      // estimated absolute error
    int panels = 0;
    long evaluations = 0;
};

// Adaptive Gauss-Legendre integration of a complex-valued integrand over
// [a, b].  Each panel is estimated with a 7/15-point pair; the panel with
// the largest error estimate is bisected until the summed error meets
// opts.abs_tol.  Throws NumericalError if max_panels is reached first.
QuadResult integrate_adaptive(const std::function<std::complex<double>(double)>& f,
                              double a, double b, const QuadOptions& opts = {});

// Uniform trapezoidal rule over one period [0, 2*pi).  Spectrally accurate
// for smooth periodic integrands; exact for trigonometric polynomials of
// degree < n.
std::complex<double> integrate_periodic(const std::function<std::complex<double>(double)>& f,
                                        int n = 32);

} // namespace qlink
