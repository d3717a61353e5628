#pragma once

#include "qlink/cavity.hpp"
#include "qlink/collection.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qlink {

enum class Objective { two_level, rb };

struct OptimizationResult {
    double t_high_opt = 0.0;
    double eta_opt = 0.0;
    long evaluations = 0;
};

struct OptimizeOptions {
    double rel_tol = 1e-5;   // relative tolerance on T_high
    double t_min = 1e-6;
    double t_max = 0.1;
};

// Maximizes the selected collection efficiency over the out-coupling mirror
// transmission.  Golden-section search on log10(T_high); if the interior
// probe does not dominate both bracket endpoints, falls back to a 200-point
// log-grid scan with local refinement.
OptimizationResult optimize_t_high(const CavityGeometry& geom, double t_low,
                                   double loss_rt, const AtomLine& line,
                                   Objective objective,
                                   const OptimizeOptions& opts = {});

struct SweepSpec {
    enum class Variable { t_high, d_crit, na };
    enum class ThighPolicy { fixed, reoptimize, frozen_at_anchor };

    Variable variable = Variable::t_high;
    double lo = 0.0;
    double hi = 0.0;
    int points = 2;
    bool log_spacing = true;
    // Extra abscissas merged into the grid (e.g. the frozen-T anchor), so
    // that anchor rows are present exactly.
    std::vector<double> include;

    // Held-fixed configuration.
    AtomLine line = AtomLine::rb_d2();
    double t_low = 10e-6;
    double loss_rt = 40e-6;
    Objective objective = Objective::rb;

    // Cavity sweeps.
    double mirror_roc = 0.0;          // all cavity sweeps
    double d_crit = 0.0;              // t_high sweep: fixed geometry
    ThighPolicy policy = ThighPolicy::reoptimize;  // d_crit sweep
    double t_high = 0.0;              // policy == fixed
    double anchor_d_crit = 10e-6;     // policy == frozen_at_anchor
};

struct SweepRow {
    double x = 0.0;
    bool valid = false;
    std::string error;
    std::optional<double> eta;          // two-level efficiency
    std::optional<double> eta_rb;
    std::optional<double> cooperativity;
    std::optional<double> finesse;
    std::optional<double> kappa_fwhm;   // rad/s
    std::optional<double> t_high;       // transmission used at this row
};

// Evaluates the requested sweep point by point; a point that fails its
// preconditions yields an invalid row instead of aborting the sweep.  Rows
// are emitted in abscissa order.
std::vector<SweepRow> sweep(const SweepSpec& spec);

} // namespace qlink
