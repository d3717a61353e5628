#include "qlink/cavity.hpp"

#include "qlink/constants.hpp"

#include <cmath>
#include <stdexcept>

namespace qlink {

using constants::epsilon0;
using constants::hbar;
using constants::pi;
using constants::speed_of_light;
using constants::two_pi;

double AtomLine::angular_frequency() const {
    return two_pi * speed_of_light / wavelength;
}

double AtomLine::dipole_element() const {
    const double omega = angular_frequency();
    return std::sqrt(3.0 * pi * epsilon0 * hbar * std::pow(speed_of_light, 3) *
                     gamma_fwhm / std::pow(omega, 3));
}

AtomLine AtomLine::rb_d2() {
    return {780e-9, two_pi * 6.07e6};
}

void MirrorSet::validate() const {
    for (double v : {t_high, t_low, loss_rt}) {
        if (!(v > 0.0) || !(v < 1.0)) {
            throw std::invalid_argument(
                "mirror transmissions and round-trip loss must lie in (0, 1)");
        }
    }
    if (!(total_loss() < 1.0)) {
        throw std::invalid_argument("total mirror loss must be below 1");
    }
}

bool CavityGeometry::is_stable() const {
    const double s = stability();
    return s * s <= 1.0;
}

void CavityGeometry::validate() const {
    if (!(length > 0.0) || !(mirror_roc > 0.0)) {
        throw std::invalid_argument("cavity length and mirror curvature must be positive");
    }
    if (!is_stable()) {
        throw std::invalid_argument("unstable cavity geometry: s^2 > 1");
    }
}

CavityGeometry CavityGeometry::from_critical_distance(double mirror_roc, double d_crit) {
    return {2.0 * mirror_roc - d_crit, mirror_roc};
}

double finesse(const MirrorSet& mirrors) {
    mirrors.validate();
    const double product = (1.0 - mirrors.t_low) * (1.0 - mirrors.t_high) *
                           (1.0 - mirrors.loss_rt);
    return pi * std::pow(product, 0.25) / (1.0 - std::sqrt(product));
}

double kappa_fwhm(double length, double finesse) {
    if (!(length > 0.0) || !(finesse > 0.0)) {
        throw std::invalid_argument("kappa requires positive length and finesse");
    }
    return pi * speed_of_light / (length * finesse);
}

double near_concentric_waist(const CavityGeometry& geom, const AtomLine& line) {
    geom.validate();
    const double half = 0.5 * geom.length;
    if (!(geom.mirror_roc - half > 0.0)) {
        throw std::invalid_argument(
            "waist undefined at or beyond the concentric point (d_crit <= 0)");
    }
    const double confocal_waist = std::sqrt(geom.length * line.wavelength / two_pi);
    return confocal_waist * std::pow((geom.mirror_roc - half) / half, 0.25);
}

CqedParams cqed_params(const CavityGeometry& geom, const MirrorSet& mirrors,
                       const AtomLine& line) {
    CqedParams p;
    p.waist = near_concentric_waist(geom, line);
    p.mode_volume = pi * p.waist * p.waist * geom.length / 4.0;
    const double omega = line.angular_frequency();
    p.vacuum_field = std::sqrt(hbar * omega / (2.0 * epsilon0 * p.mode_volume));
    p.g = line.dipole_element() * p.vacuum_field / hbar;
    p.finesse = finesse(mirrors);
    p.kappa_fwhm = kappa_fwhm(geom.length, p.finesse);
    p.cooperativity = 2.0 * p.g * p.g / (p.kappa_fwhm * line.gamma_fwhm);
    return p;
}

double transverse_mode_spacing(const CavityGeometry& geom) {
    geom.validate();
    const double s = geom.stability();
    return speed_of_light / (2.0 * geom.length) * (1.0 - std::acos(s) / pi);
}

} // namespace qlink
