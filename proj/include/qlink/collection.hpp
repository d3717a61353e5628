#pragma once

#include "qlink/cavity.hpp"

namespace qlink {

// Decay branching among the sigma+/sigma-/pi channels; the two sigma
// channels are Purcell-enhanced by the cavity.
struct BranchingProbs {
    double p_plus = 0.0;
    double p_minus = 0.0;
    double p_pi = 0.0;

    double two_p_sigma() const { return p_plus + p_minus; }
};

// Two-level collection efficiency of the cavity:
//   eta = 2C/(1+2C) * kappa/(kappa+gamma) * T_high/(T_low+T_high+L_RT).
// Fiber coupling from the TEM00 cavity mode is taken as unity.
double two_level_efficiency(const CqedParams& params, const MirrorSet& mirrors,
                            const AtomLine& line);

// P+- = (1+2C)/(3+4C), P_pi = 1/(3+4C).
BranchingProbs branching(double cooperativity);

// Rb efficiency: eta_rb = 2 P_sigma * eta.
double rb_efficiency(const CqedParams& params, const MirrorSet& mirrors,
                     const AtomLine& line);

// Free-space counterpart for a collection lens: branching ratio 2/3 times the
// fiber-coupled two-level efficiency at the given NA.
double rb_free_space_efficiency(double na);

} // namespace qlink
