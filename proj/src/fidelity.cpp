#include "qlink/fidelity.hpp"

#include "qlink/constants.hpp"

#include <cmath>
#include <stdexcept>

namespace qlink {

double temporal_overlap_error(const CqedParams& params, const AtomLine& line,
                              double displacement_1, double displacement_2) {
    if (displacement_1 < 0.0 || displacement_2 < 0.0) {
        throw std::invalid_argument("displacements must be nonnegative");
    }
    const double k = constants::two_pi / line.wavelength;
    auto decay_rate = [&](double z) {
        const double c = std::cos(k * z);
        return line.gamma_fwhm * (1.0 + 2.0 * params.cooperativity * c * c);
    };
    const double g1 = decay_rate(displacement_1);
    const double g2 = decay_rate(displacement_2);
    const double overlap = 2.0 * std::sqrt(g1 * g2) / (g1 + g2);
    return 0.5 * (1.0 - overlap);
}

double dephasing_error(double delay, double t2_star) {
    if (!(t2_star > 0.0)) {
        throw std::invalid_argument("t2_star must be positive");
    }
    if (delay < 0.0) {
        throw std::invalid_argument("delay must be nonnegative");
    }
    const double x = delay / t2_star;
    return -std::expm1(-x * x);
}

FidelityBudget compose_budget(const std::vector<BudgetEntry>& entries) {
    FidelityBudget budget;
    budget.entries = entries;
    for (const auto& entry : entries) {
        if (entry.infidelity < 0.0 || entry.infidelity > 1.0) {
            throw std::invalid_argument("budget entry '" + entry.name +
                                        "' must lie in [0, 1]");
        }
        budget.total += entry.infidelity;
        budget.multiplicative_fidelity *= 1.0 - entry.infidelity;
    }
    if (budget.total > 1.0) {
        budget.total = 1.0;
        budget.clamped = true;
    }
    return budget;
}

double tweezer_localization(double tweezer_waist, double temperature, double trap_depth) {
    if (!(tweezer_waist > 0.0) || !(temperature > 0.0) || !(trap_depth > 0.0)) {
        throw std::invalid_argument("tweezer parameters must be positive");
    }
    return tweezer_waist * std::sqrt(constants::boltzmann * temperature / trap_depth);
}

} // namespace qlink
