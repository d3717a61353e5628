#include <doctest.h>

#include "qlink/cavity.hpp"
#include "qlink/constants.hpp"
#include "qlink/rng.hpp"

#include <cmath>
#include <initializer_list>
#include <stdexcept>

using namespace qlink;
using qlink::constants::pi;
using qlink::constants::speed_of_light;
using qlink::constants::two_pi;

namespace {

// Independent small-loss series for the finesse: with q = 1 - product of
// (1 - loss_i),  F ~ pi (1 - q/4 - 3q^2/32) / (q/2 + q^2/8 + q^3/16).
double finesse_series(const MirrorSet& m) {
    const double q =
        1.0 - (1.0 - m.t_low) * (1.0 - m.t_high) * (1.0 - m.loss_rt);
    return pi * (1.0 - q / 4.0 - 3.0 * q * q / 32.0) /
           (q / 2.0 + q * q / 8.0 + q * q * q / 16.0);
}

const MirrorSet kLongMirrors{5730e-6, 10e-6, 40e-6};
const MirrorSet kMediumMirrors{4620e-6, 10e-6, 40e-6};
const MirrorSet kShortMirrors{1540e-6, 10e-6, 40e-6};

} // namespace

TEST_CASE("finesse of the benchmark mirror sets") {
    CHECK(finesse(kLongMirrors) == doctest::Approx(1080.0).epsilon(0.01));
    CHECK(finesse(kShortMirrors) == doctest::Approx(3950.0).epsilon(0.01));
    CHECK(finesse(kMediumMirrors) == doctest::Approx(1346.0).epsilon(0.01));
}

TEST_CASE("finesse reduces to 2*pi/total-loss in the small-loss regime") {
    // First-order approximation holds to 0.5% for total loss up to 1e-2.
    for (double total : {1e-4, 1e-3, 5e-3, 1e-2}) {
        const MirrorSet m{total - 5e-5, 1e-5, 4e-5};
        CHECK(finesse(m) == doctest::Approx(two_pi / total).epsilon(5e-3));
        // Higher-order series pins it much tighter.
        CHECK(finesse(m) == doctest::Approx(finesse_series(m)).epsilon(1e-6));
    }
}

TEST_CASE("finesse is symmetric under exchange of the two transmissions") {
    const MirrorSet a{3000e-6, 25e-6, 40e-6};
    const MirrorSet b{25e-6, 3000e-6, 40e-6};
    CHECK(finesse(a) == doctest::Approx(finesse(b)).epsilon(1e-14));
}

TEST_CASE("finesse rejects degenerate mirrors") {
    CHECK_THROWS_AS(finesse(MirrorSet{0.0, 0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(finesse(MirrorSet{0.5, 0.4, 0.2}), std::invalid_argument);
}

TEST_CASE("cavity decay rate") {
    CHECK(kappa_fwhm(9.99e-3, 1080.0) / two_pi == doctest::Approx(14e6).epsilon(0.03));
    CHECK(kappa_fwhm(3.99e-3, 1346.0) / two_pi == doctest::Approx(28e6).epsilon(0.03));
    // Inverse proportionality in the length.
    CHECK(kappa_fwhm(2.0e-3, 500.0) ==
          doctest::Approx(2.0 * kappa_fwhm(4.0e-3, 500.0)).epsilon(1e-14));
    // kappa * L * F returns pi*c up to rounding.
    const double k = kappa_fwhm(7.3e-3, 1234.5);
    CHECK(std::abs(k * 7.3e-3 * 1234.5 - pi * speed_of_light) <=
          8.0 * 1e-16 * pi * speed_of_light);
}

TEST_CASE("near-concentric waist of the benchmark geometries") {
    const AtomLine rb = AtomLine::rb_d2();
    CHECK(near_concentric_waist({9.99e-3, 5e-3}, rb) ==
          doctest::Approx(6.3e-6).epsilon(0.02));
    CHECK(near_concentric_waist({3.99e-3, 2e-3}, rb) ==
          doctest::Approx(4.98e-6).epsilon(0.02));
    // Confocal limit L = R_m: the near-concentric factor is exactly one.
    const double confocal = std::sqrt(150e-6 * rb.wavelength / two_pi);
    CHECK(near_concentric_waist({150e-6, 150e-6}, rb) ==
          doctest::Approx(confocal).epsilon(1e-12));
}

TEST_CASE("waist shrinks monotonically toward the concentric point") {
    const AtomLine rb = AtomLine::rb_d2();
    double previous = 1.0;
    for (double d_crit = 100e-6; d_crit >= 1e-7; d_crit /= 2.0) {
        const CavityGeometry geom = CavityGeometry::from_critical_distance(5e-3, d_crit);
        const double w = near_concentric_waist(geom, rb);
        CHECK(w < previous);
        previous = w;
    }
}

TEST_CASE("waist is undefined at and beyond the concentric point") {
    const AtomLine rb = AtomLine::rb_d2();
    CHECK_THROWS_AS(near_concentric_waist({10e-3, 5e-3}, rb), std::invalid_argument);
    CHECK_THROWS_AS(near_concentric_waist({10.1e-3, 5e-3}, rb), std::invalid_argument);
}

TEST_CASE("cqed parameter chain reproduces the benchmark designs") {
    const AtomLine rb = AtomLine::rb_d2();

    const CqedParams longc = cqed_params({9.99e-3, 5e-3}, kLongMirrors, rb);
    CHECK(longc.cooperativity == doctest::Approx(1.67).epsilon(0.10));
    CHECK(longc.g / two_pi == doctest::Approx(8.3e6).epsilon(0.10));

    const CqedParams medium = cqed_params({3.99e-3, 2e-3}, kMediumMirrors, rb);
    CHECK(medium.cooperativity == doctest::Approx(3.22).epsilon(0.10));
    CHECK(medium.g / two_pi == doctest::Approx(17e6).epsilon(0.10));

    const CqedParams shortc = cqed_params({150e-6, 150e-6}, kShortMirrors, rb);
    CHECK(shortc.cooperativity == doctest::Approx(12.7).epsilon(0.10));
    CHECK(shortc.g / two_pi == doctest::Approx(98e6).epsilon(0.10));
}

TEST_CASE("cqed bundle is internally consistent") {
    const AtomLine rb = AtomLine::rb_d2();
    const CqedParams p = cqed_params({9.99e-3, 5e-3}, kLongMirrors, rb);
    // C = 2 g^2 / (kappa gamma)
    const double c_again = 2.0 * p.g * p.g / (p.kappa_fwhm * rb.gamma_fwhm);
    CHECK(p.cooperativity == doctest::Approx(c_again).epsilon(1e-12));
    // V = pi w0^2 L / 4
    CHECK(p.mode_volume ==
          doctest::Approx(pi * p.waist * p.waist * 9.99e-3 / 4.0).epsilon(1e-12));
    // Closed form C = 3 F lambda^2 / (pi^3 w0^2) once d is tied to gamma.
    const double closed =
        3.0 * p.finesse * rb.wavelength * rb.wavelength /
        (pi * pi * pi * p.waist * p.waist);
    CHECK(p.cooperativity == doctest::Approx(closed).epsilon(1e-9));
}

TEST_CASE("cooperativity scales as finesse over waist squared") {
    const AtomLine rb = AtomLine::rb_d2();
    CounterRng rng(7, 0);
    double ratio0 = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double roc = 1e-3 + 9e-3 * rng.next_double();
        const double d_crit = 1e-6 + 100e-6 * rng.next_double();
        const CavityGeometry geom = CavityGeometry::from_critical_distance(roc, d_crit);
        const CqedParams p = cqed_params(geom, kLongMirrors, rb);
        const double ratio = p.cooperativity * p.waist * p.waist / p.finesse;
        if (i == 0) {
            ratio0 = ratio;
        } else {
            CHECK(std::abs(ratio / ratio0 - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("transverse mode spacing of the benchmark cavities") {
    const CavityGeometry ten_mm = CavityGeometry::from_critical_distance(5e-3, 1e-6);
    CHECK(transverse_mode_spacing(ten_mm) == doctest::Approx(95e6).epsilon(0.02));
    const CavityGeometry four_mm = CavityGeometry::from_critical_distance(2e-3, 1e-6);
    CHECK(transverse_mode_spacing(four_mm) == doctest::Approx(377e6).epsilon(0.02));
}

TEST_CASE("mode spacing limits") {
    // Confocal (s = 0): delta nu = c / (4 L).
    const CavityGeometry confocal{4e-3, 4e-3};
    CHECK(transverse_mode_spacing(confocal) ==
          doctest::Approx(speed_of_light / (4.0 * 4e-3)).epsilon(1e-12));
    // Positive for every stable geometry, vanishing toward concentric.
    double previous = 1e12;
    for (double d_crit : {100e-6, 10e-6, 1e-6, 1e-7, 1e-8}) {
        const CavityGeometry geom = CavityGeometry::from_critical_distance(5e-3, d_crit);
        const double dv = transverse_mode_spacing(geom);
        CHECK(dv > 0.0);
        CHECK(dv < previous);
        previous = dv;
    }
    CHECK_THROWS_AS(transverse_mode_spacing({10.2e-3, 5e-3}), std::invalid_argument);
}
