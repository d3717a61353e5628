#pragma once

#include "qlink/quadrature.hpp"

namespace qlink {

enum class DipolePolarization { sigma_plus, sigma_minus, pi };

// Collection lens.  The focal length only sets a length scale; every result
// in this module is invariant under (f, w) -> (c*f, c*w).
struct LensSpec {
    double numerical_aperture = 0.0;
    double focal_length = 1.0;  // m

    // rho_NA = f*NA/sqrt(1-NA^2), the aperture radius in the collimated plane.
    double aperture_radius() const;
};

// Collimated Gaussian fiber mode, unit power over the infinite transverse
// plane.
struct GaussianMode {
    double waist = 0.0;  // m
};

// Fraction of the dipole's total emitted power that falls inside the lens
// aperture.  Uses the normalization in which each polarization pattern
// integrates to 1/2 over a hemisphere.  Accepts na in (0, 1]; na = 1 is the
// full-hemisphere limit.
double collection_fraction(DipolePolarization pol, const LensSpec& lens,
                           const QuadOptions& opts = {});

// Normalized mode overlap between the collimated dipole field and the
// Gaussian fiber mode, restricted to the aperture:
//   O = |<E_G, E_D>|^2 / (<E_G, E_G> <E_D, E_D>)  in [0, 1].
// The numerator is a 2-D quadrature over (rho, phi); pi-polarized light has
// zero overlap (the azimuthal integral vanishes).
double fiber_overlap(DipolePolarization pol, const LensSpec& lens,
                     const GaussianMode& mode, const QuadOptions& opts = {});

struct FiberCouplingResult {
    double efficiency = 0.0;      // eta = eta_col * O at the optimal waist
    double waist_over_focal = 0.0;
    long evaluations = 0;
};

// Fiber-coupled collection efficiency eta = eta_col * O, maximized over the
// Gaussian waist (golden-section search on w in [0.05, 5] * rho_NA).
// Requires 0 < na < 1.
double fiber_coupled_efficiency(DipolePolarization pol, double na,
                                const QuadOptions& opts = {});

FiberCouplingResult fiber_coupled_efficiency_detail(DipolePolarization pol, double na,
                                                    const QuadOptions& opts = {});

} // namespace qlink
