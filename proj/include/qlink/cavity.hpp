#pragma once

namespace qlink {

// Atomic transition.  All rates in this library are angular frequencies
// (rad/s); division by 2*pi happens only at the I/O boundary.  gamma_fwhm is
// the full width at half maximum of the atomic decay.
struct AtomLine {
    double wavelength = 0.0;   // m
    double gamma_fwhm = 0.0;   // rad/s

    double angular_frequency() const;  // omega = 2*pi*c/lambda
    // Transition dipole matrix element from the free-space spontaneous
    // emission relation d^2 = 3*pi*eps0*hbar*c^3*gamma/omega^3.
    double dipole_element() const;     // C m

    // 87Rb D2: lambda = 780 nm, gamma/2pi = 6.07 MHz.
    static AtomLine rb_d2();
};

struct MirrorSet {
    double t_high = 0.0;    // out-coupling mirror transmission
    double t_low = 0.0;     // back mirror transmission
    double loss_rt = 0.0;   // round-trip absorption/scatter loss

    double total_loss() const { return t_high + t_low + loss_rt; }
    void validate() const;
};

// Two-mirror resonator; near-concentric designs have length just below
// 2 * mirror_roc.
struct CavityGeometry {
    double length = 0.0;       // m
    double mirror_roc = 0.0;   // m

    double critical_distance() const { return 2.0 * mirror_roc - length; }
    double stability() const { return 1.0 - length / mirror_roc; }  // s
    bool is_stable() const;
    void validate() const;

    static CavityGeometry from_critical_distance(double mirror_roc, double d_crit);
};

// Derived cavity-QED bundle for one design.
struct CqedParams {
    double finesse = 0.0;
    double kappa_fwhm = 0.0;     // rad/s
    double g = 0.0;              // rad/s, vacuum Rabi frequency
    double cooperativity = 0.0;  // C = 2 g^2 / (kappa gamma)
    double waist = 0.0;          // m
    double mode_volume = 0.0;    // m^3
    double vacuum_field = 0.0;   // V/m
};

double finesse(const MirrorSet& mirrors);

// kappa = pi*c / (L * F), angular FWHM of the cavity decay.
double kappa_fwhm(double length, double finesse);

// w0 = sqrt(L*lambda/2pi) * ((R_m - L/2)/(L/2))^(1/4).
double near_concentric_waist(const CavityGeometry& geom, const AtomLine& line);

CqedParams cqed_params(const CavityGeometry& geom, const MirrorSet& mirrors,
                       const AtomLine& line);

// Frequency gap between the fundamental and the next transverse mode,
// c/2L * (1 - acos(s)/pi).  In Hz.
double transverse_mode_spacing(const CavityGeometry& geom);

} // namespace qlink
