#include <doctest.h>

#include "qlink/fidelity.hpp"
#include "qlink/mirror_opt.hpp"

#include <cmath>
#include <initializer_list>
#include <stdexcept>

using namespace qlink;

namespace {

CqedParams long_cavity_params() {
    const AtomLine rb = AtomLine::rb_d2();
    const MirrorSet mirrors{5730e-6, 10e-6, 40e-6};
    return cqed_params({9.99e-3, 5e-3}, mirrors, rb);
}

} // namespace

TEST_CASE("temporal overlap error vanishes for identical displacements") {
    const CqedParams p = long_cavity_params();
    const AtomLine rb = AtomLine::rb_d2();
    CHECK(temporal_overlap_error(p, rb, 0.0, 0.0) == 0.0);
    CHECK(temporal_overlap_error(p, rb, 80e-9, 80e-9) == 0.0);
}

TEST_CASE("temporal overlap error at 100 nm displacement stays within budget") {
    const CqedParams p = long_cavity_params();
    const AtomLine rb = AtomLine::rb_d2();
    const double err = temporal_overlap_error(p, rb, 0.0, 100e-9);
    CHECK(err > 0.0);
    CHECK(err <= 0.05);  // the budget reserves 5% for this term
}

TEST_CASE("temporal overlap error is symmetric and bounded") {
    const CqedParams p = long_cavity_params();
    const AtomLine rb = AtomLine::rb_d2();
    for (double z1 : {0.0, 40e-9, 120e-9}) {
        for (double z2 : {10e-9, 90e-9, 180e-9}) {
            const double a = temporal_overlap_error(p, rb, z1, z2);
            const double b = temporal_overlap_error(p, rb, z2, z1);
            CHECK(a == b);
            CHECK(a >= 0.0);
            CHECK(a <= 0.5);
        }
    }
    CHECK_THROWS_AS(temporal_overlap_error(p, rb, -1e-9, 0.0), std::invalid_argument);
}

TEST_CASE("temporal overlap error grows with displacement near the antinode") {
    const CqedParams p = long_cavity_params();
    const AtomLine rb = AtomLine::rb_d2();
    const double quarter_wave = rb.wavelength / 4.0;
    double previous = -1.0;
    for (int i = 0; i <= 24; ++i) {
        const double z = quarter_wave * i / 24.0;
        const double err = temporal_overlap_error(p, rb, 0.0, z);
        CHECK(err >= previous);
        previous = err;
    }
}

TEST_CASE("dephasing error") {
    CHECK(dephasing_error(60e-6, 3e-3) == doctest::Approx(4e-4).epsilon(0.10));
    CHECK(dephasing_error(0.0, 3e-3) == 0.0);
    CHECK(dephasing_error(3e-3, 3e-3) ==
          doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
    CHECK_THROWS_AS(dephasing_error(1e-6, 0.0), std::invalid_argument);
}

TEST_CASE("budget composition reproduces the benchmark total") {
    const std::vector<BudgetEntry> entries = {
        {"temporal photon overlap", 0.05}, {"spatial photon overlap", 0.01},
        {"beamsplitter and waveplates", 0.002}, {"atom qubit rotation", 0.02},
        {"atom state readout", 0.06},
    };
    const FidelityBudget budget = compose_budget(entries);
    CHECK(std::abs(budget.total * 100.0 - 14.2) <= 1e-12);
    CHECK_FALSE(budget.clamped);
    // The multiplicative bound is always the gentler number.
    CHECK(budget.total >= 1.0 - budget.multiplicative_fidelity);
    CHECK(budget.multiplicative_fidelity == doctest::Approx(0.86466).epsilon(1e-4));
}

TEST_CASE("budget edge cases") {
    const FidelityBudget empty = compose_budget({});
    CHECK(empty.total == 0.0);
    CHECK(empty.multiplicative_fidelity == 1.0);

    const FidelityBudget single = compose_budget({{"only", 0.03}});
    CHECK(single.total == 0.03);
    CHECK(single.multiplicative_fidelity == doctest::Approx(0.97).epsilon(1e-15));

    const FidelityBudget heavy = compose_budget({{"a", 0.7}, {"b", 0.6}});
    CHECK(heavy.total == 1.0);
    CHECK(heavy.clamped);

    CHECK_THROWS_AS(compose_budget({{"bad", 1.5}}), std::invalid_argument);
}

TEST_CASE("tweezer localization scale") {
    // 1 um waist, 20 uK atom in a 1 mK-deep trap: sqrt(T/U) cuts the waist by
    // about a factor of seven.
    const double k_b = 1.380649e-23;
    const double loc = tweezer_localization(1e-6, 20e-6, k_b * 1e-3);
    CHECK(loc == doctest::Approx(1e-6 * std::sqrt(0.02)).epsilon(1e-12));
    CHECK(loc < 150e-9);
    CHECK_THROWS_AS(tweezer_localization(0.0, 1e-6, 1e-27), std::invalid_argument);
}
