#include "qlink/mirror_opt.hpp"

#include "qlink/dipole_optics.hpp"
#include "qlink/errors.hpp"
#include "qlink/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qlink {

namespace {

double efficiency_at(const CavityGeometry& geom, const MirrorSet& mirrors,
                     const AtomLine& line, Objective objective) {
    const CqedParams params = cqed_params(geom, mirrors, line);
    return objective == Objective::rb
               ? rb_efficiency(params, mirrors, line)
               : two_level_efficiency(params, mirrors, line);
}

std::vector<double> make_grid(const SweepSpec& spec) {
    if (!(spec.lo < spec.hi) || spec.points < 2) {
        throw std::invalid_argument("sweep requires lo < hi and points >= 2");
    }
    std::vector<double> grid;
    grid.reserve(spec.points + spec.include.size());
    if (spec.log_spacing) {
        if (!(spec.lo > 0.0)) {
            throw std::invalid_argument("log-spaced sweep requires lo > 0");
        }
        const double la = std::log(spec.lo);
        const double lb = std::log(spec.hi);
        for (int i = 0; i < spec.points; ++i) {
            grid.push_back(std::exp(la + (lb - la) * i / (spec.points - 1)));
        }
    } else {
        for (int i = 0; i < spec.points; ++i) {
            grid.push_back(spec.lo + (spec.hi - spec.lo) * i / (spec.points - 1));
        }
    }
    for (double v : spec.include) {
        if (v >= spec.lo && v <= spec.hi) {
            grid.push_back(v);
        }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

SweepRow cavity_row(double x, const CavityGeometry& geom, const MirrorSet& mirrors,
                    const AtomLine& line) {
    SweepRow row;
    row.x = x;
    const CqedParams params = cqed_params(geom, mirrors, line);
    row.eta = two_level_efficiency(params, mirrors, line);
    row.eta_rb = rb_efficiency(params, mirrors, line);
    row.cooperativity = params.cooperativity;
    row.finesse = params.finesse;
    row.kappa_fwhm = params.kappa_fwhm;
    row.t_high = mirrors.t_high;
    row.valid = true;
    return row;
}

} // namespace

OptimizationResult optimize_t_high(const CavityGeometry& geom, double t_low,
                                   double loss_rt, const AtomLine& line,
                                   Objective objective,
                                   const OptimizeOptions& opts) {
    geom.validate();
    if (!(t_low > 0.0 && t_low < 1.0) || !(loss_rt > 0.0 && loss_rt < 1.0)) {
        throw std::invalid_argument("t_low and loss_rt must lie in (0, 1)");
    }

    long evaluations = 0;
    auto eta_of_log_t = [&](double log_t) {
        ++evaluations;
        const MirrorSet mirrors{std::pow(10.0, log_t), t_low, loss_rt};
        return efficiency_at(geom, mirrors, line, objective);
    };

    double lo = std::log10(opts.t_min);
    double hi = std::log10(opts.t_max);
    const double f_lo = eta_of_log_t(lo);
    const double f_hi = eta_of_log_t(hi);
    const double f_mid = eta_of_log_t(0.5 * (lo + hi));

    if (!(f_mid > f_lo && f_mid > f_hi)) {
        // Unimodality guard: coarse log-grid scan, then refine around the best
        // grid point.
        constexpr int kScanPoints = 200;
        int best = 0;
        double best_val = -1.0;
        for (int i = 0; i < kScanPoints; ++i) {
            const double y = lo + (hi - lo) * i / (kScanPoints - 1);
            const double v = eta_of_log_t(y);
            if (v > best_val) {
                best_val = v;
                best = i;
            }
        }
        const double step = (hi - lo) / (kScanPoints - 1);
        const double center = lo + step * best;
        lo = std::max(lo, center - step);
        hi = std::min(hi, center + step);
    }

    // Tolerance on log10(T) equivalent to the relative tolerance on T.
    const double y_tol = std::log10(1.0 + opts.rel_tol);
    const GoldenResult gold = golden_section_max(eta_of_log_t, lo, hi, y_tol);

    OptimizationResult result;
    result.t_high_opt = std::pow(10.0, gold.x);
    result.eta_opt = gold.value;
    result.evaluations = evaluations;
    if (!(result.eta_opt > 1e-12)) {
        throw NumericalError("optimize_t_high: objective is flat (efficiency ~ 0)");
    }
    return result;
}

std::vector<SweepRow> sweep(const SweepSpec& spec) {
    const std::vector<double> grid = make_grid(spec);
    std::vector<SweepRow> rows;
    rows.reserve(grid.size());

    // Frozen transmission is resolved once, at the anchor geometry.
    double frozen_t_high = spec.t_high;
    if (spec.variable == SweepSpec::Variable::d_crit &&
        spec.policy == SweepSpec::ThighPolicy::frozen_at_anchor) {
        const CavityGeometry anchor =
            CavityGeometry::from_critical_distance(spec.mirror_roc, spec.anchor_d_crit);
        frozen_t_high = optimize_t_high(anchor, spec.t_low, spec.loss_rt, spec.line,
                                        spec.objective)
                            .t_high_opt;
    }

    for (double x : grid) {
        SweepRow row;
        row.x = x;
        try {
            switch (spec.variable) {
            case SweepSpec::Variable::t_high: {
                const CavityGeometry geom =
                    CavityGeometry::from_critical_distance(spec.mirror_roc, spec.d_crit);
                row = cavity_row(x, geom, {x, spec.t_low, spec.loss_rt}, spec.line);
                break;
            }
            case SweepSpec::Variable::d_crit: {
                const CavityGeometry geom =
                    CavityGeometry::from_critical_distance(spec.mirror_roc, x);
                double t_high = frozen_t_high;
                if (spec.policy == SweepSpec::ThighPolicy::reoptimize) {
                    t_high = optimize_t_high(geom, spec.t_low, spec.loss_rt, spec.line,
                                             spec.objective)
                                 .t_high_opt;
                }
                row = cavity_row(x, geom, {t_high, spec.t_low, spec.loss_rt}, spec.line);
                break;
            }
            case SweepSpec::Variable::na: {
                const double eta =
                    fiber_coupled_efficiency(DipolePolarization::sigma_plus, x);
                row.eta = eta;
                row.eta_rb = (2.0 / 3.0) * eta;
                row.valid = true;
                break;
            }
            }
        } catch (const std::exception& e) {
            row = SweepRow{};
            row.x = x;
            row.valid = false;
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace qlink
