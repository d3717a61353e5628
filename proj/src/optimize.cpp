#include "qlink/optimize.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace qlink {

GoldenResult golden_section_max(const std::function<double(double)>& f,
                                double a, double b, double x_tol) {
    if (!(a < b)) {
        throw std::invalid_argument("golden_section_max: requires a < b");
    }
    if (!(x_tol > 0.0)) {
        throw std::invalid_argument("golden_section_max: requires x_tol > 0");
    }
    constexpr double inv_phi = 0.6180339887498948482;  // 1/phi
    GoldenResult result;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    result.evaluations = 2;
    while (b - a > x_tol) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
        ++result.evaluations;
    }
    result.x = 0.5 * (a + b);
    result.value = f(result.x);
    ++result.evaluations;
    return result;
}

} // namespace qlink
