#include "qlink/dipole_optics.hpp"

#include "qlink/constants.hpp"
#include "qlink/errors.hpp"
#include "qlink/optimize.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace qlink {

namespace {

using constants::pi;
using constants::two_pi;
using std::complex;

constexpr complex<double> kImag{0.0, 1.0};

// Dimensionless field prefactors: |E_sigma|^2 = (3/16pi)(1+cos^2 theta) and
// |E_pi|^2 = (3/8pi) sin^2 theta, each integrating to 1/2 over a hemisphere.
const double kSigmaPrefactor = std::sqrt(3.0 / (16.0 * pi));
const double kPiPrefactor = std::sqrt(3.0 / (8.0 * pi));

void check_na_open(double na) {
    if (!(na > 0.0) || !(na < 1.0)) {
        throw std::invalid_argument("numerical aperture must lie in (0, 1)");
    }
}

int handedness(DipolePolarization pol) {
    return pol == DipolePolarization::sigma_minus ? -1 : +1;
}

// Radiating-dipole field components on the sphere, (theta, phi) components.
struct SphericalField {
    complex<double> e_theta;
    complex<double> e_phi;
};

SphericalField dipole_field_sphere(DipolePolarization pol, double theta, double phi) {
    if (pol == DipolePolarization::pi) {
        return {kPiPrefactor * kImag * std::sin(theta), {0.0, 0.0}};
    }
    const double s = handedness(pol);
    const complex<double> common =
        kSigmaPrefactor * kImag * std::exp(kImag * (s * phi));
    return {common * (s * std::cos(theta)), common * kImag};
}

// Collimated dipole field just after the lens, cylindrical (rho, phi)
// components in units of the focal length (x = rho/f).  The sqrt(cos theta)
// projection factor is folded in; cos theta = (1+x^2)^(-1/2).
struct PlanarField {
    complex<double> e_rho;
    complex<double> e_phi;
};

PlanarField dipole_field_plane(DipolePolarization pol, double x, double phi) {
    const double r2 = 1.0 + x * x;
    const double envelope = std::pow(r2, -0.75);
    const double cos_theta = 1.0 / std::sqrt(r2);
    if (pol == DipolePolarization::pi) {
        const double sin_theta = x * cos_theta;
        return {kPiPrefactor * kImag * envelope * sin_theta, {0.0, 0.0}};
    }
    const double s = handedness(pol);
    const complex<double> common =
        kSigmaPrefactor * kImag * std::exp(kImag * (s * phi)) * envelope;
    return {common * (s * cos_theta), common * kImag};
}

// Circularly polarized Gaussian mode matched in handedness to the dipole
// polarization, unit power over the plane.  W is the waist in focal-length
// units.
PlanarField gaussian_mode_plane(int s, double x, double phi, double w_over_f) {
    const double amp = std::exp(-x * x / (w_over_f * w_over_f)) /
                       (std::sqrt(pi) * w_over_f);
    const complex<double> swirl = std::exp(kImag * (s * phi));
    return {amp * swirl, amp * kImag * static_cast<double>(s) * swirl};
}

double gaussian_norm_on_aperture(double x_na, double w_over_f) {
    return -std::expm1(-2.0 * x_na * x_na / (w_over_f * w_over_f));
}

// <E_G, E_D> over the aperture disk: adaptive Gauss-Legendre in rho nested
// over a uniform periodic trapezoid in phi.
complex<double> mode_projection(DipolePolarization pol, double x_na,
                                double w_over_f, const QuadOptions& opts) {
    const int s = handedness(pol);
    auto radial = [&](double x) -> complex<double> {
        auto azimuthal = [&](double phi) -> complex<double> {
            const PlanarField g = gaussian_mode_plane(s, x, phi, w_over_f);
            const PlanarField d = dipole_field_plane(pol, x, phi);
            return g.e_rho * std::conj(d.e_rho) + g.e_phi * std::conj(d.e_phi);
        };
        return integrate_periodic(azimuthal) * x;
    };
    return integrate_adaptive(radial, 0.0, x_na, opts).value;
}

} // namespace

double LensSpec::aperture_radius() const {
    check_na_open(numerical_aperture);
    if (!(focal_length > 0.0)) {
        throw std::invalid_argument("focal length must be positive");
    }
    const double na = numerical_aperture;
    return focal_length * na / std::sqrt((1.0 - na) * (1.0 + na));
}

double collection_fraction(DipolePolarization pol, const LensSpec& lens,
                           const QuadOptions& opts) {
    const double na = lens.numerical_aperture;
    if (!(na > 0.0) || na > 1.0) {
        throw std::invalid_argument("numerical aperture must lie in (0, 1]");
    }
    const double theta_max = na >= 1.0 ? 0.5 * pi : std::asin(na);
    auto polar = [&](double theta) -> complex<double> {
        auto azimuthal = [&](double phi) -> complex<double> {
            const SphericalField f = dipole_field_sphere(pol, theta, phi);
            return std::norm(f.e_theta) + std::norm(f.e_phi);
        };
        return integrate_periodic(azimuthal) * std::sin(theta);
    };
    return integrate_adaptive(polar, 0.0, theta_max, opts).value.real();
}

double fiber_overlap(DipolePolarization pol, const LensSpec& lens,
                     const GaussianMode& mode, const QuadOptions& opts) {
    check_na_open(lens.numerical_aperture);
    if (!(mode.waist > 0.0)) {
        throw std::invalid_argument("Gaussian waist must be positive");
    }
    const double x_na = lens.aperture_radius() / lens.focal_length;
    const double w_over_f = mode.waist / lens.focal_length;
    const complex<double> projection = mode_projection(pol, x_na, w_over_f, opts);
    const double coupled = std::norm(projection);
    const double collected = collection_fraction(pol, lens, opts);
    const double mode_power = gaussian_norm_on_aperture(x_na, w_over_f);
    if (coupled == 0.0) {
        return 0.0;
    }
    const double overlap = coupled / (mode_power * collected);
    return std::min(overlap, 1.0);
}

FiberCouplingResult fiber_coupled_efficiency_detail(DipolePolarization pol, double na,
                                                    const QuadOptions& opts) {
    check_na_open(na);
    const double x_na = na / std::sqrt((1.0 - na) * (1.0 + na));
    long evaluations = 0;
    // eta = eta_col * O = |<E_G, E_D>|^2 / <E_G, E_G>; the collected fraction
    // cancels against the overlap normalization.
    auto efficiency_at = [&](double w_over_f) {
        ++evaluations;
        const double coupled = std::norm(mode_projection(pol, x_na, w_over_f, opts));
        return coupled / gaussian_norm_on_aperture(x_na, w_over_f);
    };
    const GoldenResult best =
        golden_section_max(efficiency_at, 0.05 * x_na, 5.0 * x_na, 1e-6 * x_na);
    FiberCouplingResult result;
    result.efficiency = best.value;
    result.waist_over_focal = best.x;
    result.evaluations = evaluations;
    return result;
}

double fiber_coupled_efficiency(DipolePolarization pol, double na,
                                const QuadOptions& opts) {
    return fiber_coupled_efficiency_detail(pol, na, opts).efficiency;
}

} // namespace qlink
