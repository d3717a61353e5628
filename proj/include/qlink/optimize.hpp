#pragma once

#include <functional>

namespace qlink {

struct GoldenResult {
    double x = 0.0;
    double value = 0.0;
    long evaluations = 0;
};

// Golden-section maximization of a unimodal function on [a, b].  Terminates
// when the bracket width drops below x_tol.  The returned value is f
// re-evaluated at the returned x.
GoldenResult golden_section_max(const std::function<double(double)>& f,
                                double a, double b, double x_tol);

} // namespace qlink
