#pragma once

#include "qlink/cavity.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qlink {

// Detection path from the collection optic to the Bell-state analyzer.
struct DetectionChain {
    double detector_qe = 0.7;            // SPCM quantum efficiency at 780 nm
    double fiber_length_km = 0.01;
    double attenuation_length_km = 1.091;
    double bell_success = 0.5;           // linear-optics Bell measurement bound

    double effective_detection() const;  // qe * exp(-L_f/L_att)
    void validate() const;
};

// Durations of the entanglement-generation sequence plus the attempt-block
// structure.  The verification-step durations are stored for completeness
// but never enter the generation time.
struct ProtocolTimings {
    double t_load = 100e-3;  // MOT preparation + dipole-trap load
    double t_pump = 6e-6;
    double t_pi = 30e-9;
    double t_det = 1e-6;
    double t_cool = 100e-6;
    int n1 = 10;             // excitation attempts per cooling block

    // Atom-loss channel: heating loss per node per completed cooling block,
    // plus background collisions at 1/background_lifetime.  Defaults give a
    // per-block loss of the two-node experiment just under 1e-4.
    double p_loss_per_block = 3e-5;
    double background_lifetime = 10.0;   // s

    // Whether generation cools after a success as well (verification always
    // does; generation by default does not).
    bool cool_after_success = false;

    // Verification steps (stored, excluded from the generation time).
    double t_microwave = 50e-6;
    double t_rotation = 500e-6;
    double t_measure = 3e-3;

    double attempt_time() const { return t_pump + t_pi + t_det; }
    double block_time() const { return n1 * attempt_time() + t_cool; }
    void validate() const;
};

struct McResult {
    double mean_time_to_entanglement = 0.0;  // s
    double rate = 0.0;                       // 1/s
    double mean_attempts = 0.0;
    double mean_epochs = 0.0;                // completed cooling blocks
    std::uint64_t reload_events = 0;
    double confidence_halfwidth = 0.0;       // 95% CI on the mean time
};

// P_aa = bell_success * (eta_rb * eta_det)^2 with eta_det including fiber
// attenuation.
double p_atom_atom(double eta_rb, const DetectionChain& chain);

enum class TimeConvention {
    // Whole-epoch estimate: max(1, 1/(p*N1)) addressing epochs of N1 attempts,
    // each ending in a cooling block, so every generation event books at
    // least one cooling period.
    epoch,
    // Exact renewal expectation: E[t] = attempt_time/p + q^N1/(1-q^N1) * t_cool.
    renewal,
};

double analytic_entanglement_time(double p_aa, const ProtocolTimings& timings,
                                  TimeConvention convention);

// Attempt-level Monte Carlo of the generation sequence: Bernoulli(p_aa)
// attempts, a cooling block after every n1 consecutive failures, per-node
// recapture loss at each completed block, and a trap reload after any loss.
// Bit-identical for a fixed seed regardless of worker count.
McResult simulate(double p_aa, const ProtocolTimings& timings,
                  const DetectionChain& chain, std::uint64_t trials,
                  std::uint64_t seed, int workers = 0);

struct LinkDesign {
    enum class Kind { cavity, lens };
    std::string name;
    Kind kind = Kind::cavity;
    // Cavity designs.
    double mirror_roc = 0.0;
    double d_crit = 0.0;
    double t_low = 10e-6;
    double loss_rt = 40e-6;
    // Lens designs.
    double na = 0.0;
};

struct RateRow {
    std::string name;
    bool valid = false;
    std::string error;
    double eta_rb = 0.0;
    double p_aa = 0.0;
    double rate = 0.0;  // 1/s, epoch-convention analytic rate
};

// One row per design; cavity rows use the rb-optimized T_high, lens rows the
// free-space Rb efficiency.  Rows that fail preconditions (or have zero
// efficiency) are flagged invalid rather than aborting the sweep.
std::vector<RateRow> rate_sweep(const std::vector<LinkDesign>& designs,
                                const AtomLine& line,
                                const ProtocolTimings& timings,
                                const DetectionChain& chain);

} // namespace qlink
