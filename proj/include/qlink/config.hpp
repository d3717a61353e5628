#pragma once

#include "qlink/cavity.hpp"
#include "qlink/entangle.hpp"
#include "qlink/fidelity.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qlink {

// All config keys carry explicit units in their names; conversion to SI
// happens in the accessors below.

struct CavityDesignConfig {
    std::string name;
    double length_mm = 0.0;
    double mirror_roc_mm = 0.0;
    double t_high_ppm = 0.0;

    CavityGeometry geometry() const;
    MirrorSet mirrors(double t_low_ppm, double loss_rt_ppm) const;
};

struct Fig2Config {
    double na_min = 0.05;
    double na_max = 0.999;
    int points = 40;
};

struct Fig3Config {
    std::vector<double> lengths_mm = {2.0, 3.99, 9.99, 20.0};
    double d_crit_um = 10.0;
    double t_high_ppm_min = 100.0;
    double t_high_ppm_max = 100000.0;
    int points = 60;
};

struct DcritSweepConfig {
    double d_crit_um_min = 1.0;
    double d_crit_um_max = 100.0;
    int points = 25;
    double anchor_d_crit_um = 10.0;
};

struct SimulateConfig {
    std::uint64_t trials = 1000000;
    std::uint64_t seed = 42;
    std::string design = "long-near-concentric";
    std::optional<double> p_aa_override;
};

struct BudgetEntryConfig {
    std::string name;
    double percent = 0.0;
};

struct RunConfig {
    // Atom line.
    double wavelength_nm = 780.0;
    double gamma_over_2pi_mhz = 6.07;

    // Shared mirror parameters and the cavity designs.
    double t_low_ppm = 10.0;
    double loss_rt_ppm = 40.0;
    std::vector<CavityDesignConfig> cavities;

    // Free-space collection lenses.
    std::vector<double> lens_na = {0.5, 0.7, 0.9};

    // Detection chain.
    double detector_qe = 0.7;
    double fiber_length_km = 0.01;
    double attenuation_length_km = 1.091;

    // Protocol timings.
    double t_load_ms = 100.0;
    double t_pump_us = 6.0;
    double t_pi_ns = 30.0;
    double t_det_us = 1.0;
    double t_cool_us = 100.0;
    int n1 = 10;
    double p_loss_per_block = 3e-5;
    double background_lifetime_s = 10.0;

    // Verification steps (informational).
    double t_microwave_us = 50.0;
    double t_rotation_us = 500.0;
    double t_measure_ms = 3.0;

    // Fidelity budget.
    std::vector<BudgetEntryConfig> budget_percent;
    double dephasing_delay_us = 60.0;
    double t2_star_ms = 3.0;

    // Figure sweeps.
    Fig2Config fig2;
    Fig3Config fig3;
    DcritSweepConfig d_crit_sweep;

    SimulateConfig simulate;

    AtomLine atom_line() const;
    DetectionChain detection_chain() const;
    ProtocolTimings protocol_timings() const;
    std::vector<BudgetEntry> budget_entries() const;
    const CavityDesignConfig& cavity_by_name(const std::string& name) const;

    void validate() const;
};

// Built-in defaults; identical to the shipped configs/default.json.
RunConfig default_config();

// Strict parsing: unknown keys are rejected with their full key path.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& config);

} // namespace qlink
