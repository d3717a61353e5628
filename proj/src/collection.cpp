#include "qlink/collection.hpp"

#include "qlink/dipole_optics.hpp"

#include <stdexcept>

namespace qlink {

double two_level_efficiency(const CqedParams& params, const MirrorSet& mirrors,
                            const AtomLine& line) {
    const double c2 = 2.0 * params.cooperativity;
    const double into_mode = c2 / (1.0 + c2);
    const double escape = params.kappa_fwhm / (params.kappa_fwhm + line.gamma_fwhm);
    const double out_coupling = mirrors.t_high / mirrors.total_loss();
    return into_mode * escape * out_coupling;
}

BranchingProbs branching(double cooperativity) {
    if (cooperativity < 0.0) {
        throw std::invalid_argument("cooperativity must be nonnegative");
    }
    const double denom = 3.0 + 4.0 * cooperativity;
    BranchingProbs probs;
    probs.p_plus = (1.0 + 2.0 * cooperativity) / denom;
    probs.p_minus = probs.p_plus;
    probs.p_pi = 1.0 / denom;
    return probs;
}

double rb_efficiency(const CqedParams& params, const MirrorSet& mirrors,
                     const AtomLine& line) {
    return branching(params.cooperativity).two_p_sigma() *
           two_level_efficiency(params, mirrors, line);
}

double rb_free_space_efficiency(double na) {
    return (2.0 / 3.0) *
           fiber_coupled_efficiency(DipolePolarization::sigma_plus, na);
}

} // namespace qlink
