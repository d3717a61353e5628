#pragma once

#include "qlink/cavity.hpp"

#include <string>
#include <vector>

namespace qlink {

struct BudgetEntry {
    std::string name;
    double infidelity = 0.0;  // fraction in [0, 1]
};

struct FidelityBudget {
    std::vector<BudgetEntry> entries;
    double total = 0.0;                    // additive sum (clamped at 1)
    double multiplicative_fidelity = 1.0;  // prod(1 - eps_i)
    bool clamped = false;
};

// Infidelity from imperfect temporal overlap of the two photon wave packets,
// [1 - <alpha_1|alpha_2>]/2.  Each atom's displacement z_i from the cavity
// antinode reduces its cooperativity as C cos^2(k z_i); the photon envelope
// decays at Gamma_i = gamma (1 + 2 C_i) and the overlap of two exponentials
// is 2 sqrt(Gamma_1 Gamma_2)/(Gamma_1 + Gamma_2).
double temporal_overlap_error(const CqedParams& params, const AtomLine& line,
                              double displacement_1, double displacement_2);

// 1 - exp(-(delay/T2*)^2).
double dephasing_error(double delay, double t2_star);

// Additive infidelity budget; the multiplicative fidelity is reported
// alongside.  A total above 1 is clamped and flagged.
FidelityBudget compose_budget(const std::vector<BudgetEntry>& entries);

// Tweezer position spread w * sqrt(kB * T / U) for trap waist w, atom
// temperature T (K) and trap depth U (J).
double tweezer_localization(double tweezer_waist, double temperature, double trap_depth);

} // namespace qlink
