#include "qlink/quadrature.hpp"

#include "qlink/constants.hpp"
#include "qlink/errors.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

namespace qlink {

namespace {

struct NodeWeight {
    double x;
    double w;
};

constexpr NodeWeight kGl7[7] = {
    {-9.49107912342758486e-01, 1.29484966168870647e-01},
    {-7.41531185599394460e-01, 2.79705391489276589e-01},
    {-4.05845151377397184e-01, 3.81830050505118312e-01},
    {+0.00000000000000000e+00, 4.17959183673468959e-01},
    {+4.05845151377397184e-01, 3.81830050505118312e-01},
    {+7.41531185599394460e-01, 2.79705391489276589e-01},
    {+9.49107912342758486e-01, 1.29484966168870647e-01},
};

constexpr NodeWeight kGl15[15] = {
    {-9.87992518020485377e-01, 3.07532419961186465e-02},
    {-9.37273392400705951e-01, 7.03660474881080689e-02},
    {-8.48206583410427206e-01, 1.07159220467171773e-01},
    {-7.24417731360170070e-01, 1.39570677926153908e-01},
    {-5.70972172608538830e-01, 1.66269205816993781e-01},
    {-3.94151347077563385e-01, 1.86161000015561878e-01},
    {-2.01194093997434514e-01, 1.98431485327111246e-01},
    {+0.00000000000000000e+00, 2.02578241925560898e-01},
    {+2.01194093997434514e-01, 1.98431485327111246e-01},
    {+3.94151347077563385e-01, 1.86161000015561878e-01},
    {+5.70972172608538830e-01, 1.66269205816993781e-01},
    {+7.24417731360170070e-01, 1.39570677926153908e-01},
    {+8.48206583410427206e-01, 1.07159220467171773e-01},
    {+9.37273392400705951e-01, 7.03660474881080689e-02},
    {+9.87992518020485377e-01, 3.07532419961186465e-02},
};

struct Panel {
    double a = 0.0;
    double b = 0.0;
    std::complex<double> value{0.0, 0.0};
    double error = 0.0;
};

Panel evaluate_panel(const std::function<std::complex<double>(double)>& f,
                     double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::complex<double> low{0.0, 0.0};
    std::complex<double> high{0.0, 0.0};
    for (const auto& nw : kGl7) {
        low += nw.w * f(mid + half * nw.x);
    }
    for (const auto& nw : kGl15) {
        high += nw.w * f(mid + half * nw.x);
    }
    low *= half;
    high *= half;
    Panel p;
    p.a = a;
    p.b = b;
    p.value = high;
    p.error = std::abs(high - low);
    return p;
}

} // namespace

QuadResult integrate_adaptive(const std::function<std::complex<double>(double)>& f,
                              double a, double b, const QuadOptions& opts) {
    QuadResult result;
    if (a == b) {
        return result;
    }

    auto cmp = [](const Panel& lhs, const Panel& rhs) { return lhs.error < rhs.error; };
    std::priority_queue<Panel, std::vector<Panel>, decltype(cmp)> queue(cmp);
    queue.push(evaluate_panel(f, a, b));
    result.evaluations = 22;
    double total_error = queue.top().error;

    while (total_error > opts.abs_tol &&
           static_cast<int>(queue.size()) < opts.max_panels) {
        Panel worst = queue.top();
        queue.pop();
        total_error -= worst.error;
        const double mid = 0.5 * (worst.a + worst.b);
        Panel left = evaluate_panel(f, worst.a, mid);
        Panel right = evaluate_panel(f, mid, worst.b);
        result.evaluations += 44;
        total_error += left.error + right.error;
        queue.push(left);
        queue.push(right);
    }

    // Final sums in a deterministic (interval-sorted) order.
    std::vector<Panel> panels;
    panels.reserve(queue.size());
    while (!queue.empty()) {
        panels.push_back(queue.top());
        queue.pop();
    }
    std::sort(panels.begin(), panels.end(),
              [](const Panel& lhs, const Panel& rhs) { return lhs.a < rhs.a; });
    std::complex<double> sum{0.0, 0.0};
    double err = 0.0;
    for (const auto& p : panels) {
        sum += p.value;
        err += p.error;
    }
    result.value = sum;
    result.error = err;
    result.panels = static_cast<int>(panels.size());

    if (err > opts.abs_tol) {
        std::ostringstream oss;
        oss << "quadrature did not converge: error " << err << " > tolerance "
            << opts.abs_tol << " after " << result.panels << " panels";
        throw NumericalError(oss.str());
    }
    return result;
}

std::complex<double> integrate_periodic(const std::function<std::complex<double>(double)>& f,
                                        int n) {
    std::complex<double> sum{0.0, 0.0};
    for (int j = 0; j < n; ++j) {
        sum += f(constants::two_pi * j / n);
    }
    return sum * (constants::two_pi / n);
}

} // namespace qlink
