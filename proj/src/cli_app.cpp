#include "qlink/cli_app.hpp"

#include "qlink/collection.hpp"
#include "qlink/constants.hpp"
#include "qlink/csv.hpp"
#include "qlink/dipole_optics.hpp"
#include "qlink/errors.hpp"
#include "qlink/fidelity.hpp"
#include "qlink/mirror_opt.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace qlink::cli {

namespace {

using constants::two_pi;

struct CavityPoint {
    CqedParams params;
    MirrorSet mirrors;
    double eta_rb = 0.0;
};

CavityPoint evaluate_cavity(const CavityGeometry& geom, const MirrorSet& mirrors,
                            const AtomLine& line) {
    CavityPoint point;
    point.params = cqed_params(geom, mirrors, line);
    point.mirrors = mirrors;
    point.eta_rb = rb_efficiency(point.params, mirrors, line);
    return point;
}

std::vector<double> linear_grid(double lo, double hi, int points) {
    std::vector<double> grid;
    grid.reserve(points);
    for (int i = 0; i < points; ++i) {
        grid.push_back(lo + (hi - lo) * i / (points - 1));
    }
    return grid;
}

// Near-concentric designs are the ones swept against the critical distance.
std::vector<CavityDesignConfig> near_concentric_designs(const RunConfig& config) {
    std::vector<CavityDesignConfig> designs;
    for (const auto& c : config.cavities) {
        if (c.length_mm > c.mirror_roc_mm) {
            designs.push_back(c);
        }
    }
    return designs;
}

void write_fig2(const RunConfig& config, std::ostream& out) {
    CsvWriter csv(out, {"na", "free_space", "fiber_coupled"});
    const auto grid = linear_grid(config.fig2.na_min, config.fig2.na_max,
                                  config.fig2.points);
    for (double na : grid) {
        const double collected =
            collection_fraction(DipolePolarization::sigma_plus, {na, 1.0});
        const double coupled =
            fiber_coupled_efficiency(DipolePolarization::sigma_plus, na);
        csv.row({na, collected, coupled});
    }
}

void write_fig3(const RunConfig& config, std::ostream& out) {
    const AtomLine line = config.atom_line();
    std::vector<std::string> columns = {"t_high_ppm"};
    for (double length_mm : config.fig3.lengths_mm) {
        columns.push_back("eta_L" + format_double(length_mm) + "mm");
        columns.push_back("eta_rb_L" + format_double(length_mm) + "mm");
    }
    CsvWriter csv(out, columns);

    std::vector<std::vector<SweepRow>> sweeps;
    for (double length_mm : config.fig3.lengths_mm) {
        SweepSpec spec;
        spec.variable = SweepSpec::Variable::t_high;
        spec.lo = config.fig3.t_high_ppm_min * 1e-6;
        spec.hi = config.fig3.t_high_ppm_max * 1e-6;
        spec.points = config.fig3.points;
        spec.line = line;
        spec.t_low = config.t_low_ppm * 1e-6;
        spec.loss_rt = config.loss_rt_ppm * 1e-6;
        // Geometry fixed by the cavity length and the sweep's critical distance.
        const double length = length_mm * 1e-3;
        spec.mirror_roc = 0.5 * (length + config.fig3.d_crit_um * 1e-6);
        spec.d_crit = config.fig3.d_crit_um * 1e-6;
        sweeps.push_back(sweep(spec));
    }
    for (std::size_t i = 0; i < sweeps.front().size(); ++i) {
        std::vector<std::optional<double>> row = {sweeps.front()[i].x * 1e6};
        for (const auto& s : sweeps) {
            row.push_back(s[i].eta);
            row.push_back(s[i].eta_rb);
        }
        csv.row(row);
    }
}

void write_fig46(const RunConfig& config, std::ostream& out, Objective objective) {
    const AtomLine line = config.atom_line();
    const auto designs = near_concentric_designs(config);
    const bool rb = objective == Objective::rb;
    const double lens_scale = rb ? 2.0 / 3.0 : 1.0;

    std::vector<std::string> columns = {"d_crit_um"};
    for (const auto& d : designs) {
        columns.push_back("eta_opt_" + d.name);
        columns.push_back("eta_frozen_" + d.name);
    }
    for (double na : config.lens_na) {
        columns.push_back("eta_lens_na" + format_double(na));
    }
    CsvWriter csv(out, columns);

    auto make_spec = [&](const CavityDesignConfig& design, SweepSpec::ThighPolicy policy) {
        SweepSpec spec;
        spec.variable = SweepSpec::Variable::d_crit;
        spec.lo = config.d_crit_sweep.d_crit_um_min * 1e-6;
        spec.hi = config.d_crit_sweep.d_crit_um_max * 1e-6;
        spec.points = config.d_crit_sweep.points;
        spec.include = {config.d_crit_sweep.anchor_d_crit_um * 1e-6};
        spec.line = line;
        spec.t_low = config.t_low_ppm * 1e-6;
        spec.loss_rt = config.loss_rt_ppm * 1e-6;
        spec.objective = objective;
        spec.mirror_roc = design.mirror_roc_mm * 1e-3;
        spec.policy = policy;
        spec.anchor_d_crit = config.d_crit_sweep.anchor_d_crit_um * 1e-6;
        return spec;
    };

    std::vector<std::vector<SweepRow>> optimized;
    std::vector<std::vector<SweepRow>> frozen;
    for (const auto& design : designs) {
        optimized.push_back(sweep(make_spec(design, SweepSpec::ThighPolicy::reoptimize)));
        frozen.push_back(sweep(make_spec(design, SweepSpec::ThighPolicy::frozen_at_anchor)));
    }
    std::vector<double> lens_eta;
    for (double na : config.lens_na) {
        lens_eta.push_back(lens_scale *
                           fiber_coupled_efficiency(DipolePolarization::sigma_plus, na));
    }

    const std::size_t rows = optimized.empty() ? 0 : optimized.front().size();
    for (std::size_t i = 0; i < rows; ++i) {
        std::vector<std::optional<double>> row = {optimized.front()[i].x * 1e6};
        for (std::size_t d = 0; d < designs.size(); ++d) {
            row.push_back(rb ? optimized[d][i].eta_rb : optimized[d][i].eta);
            row.push_back(rb ? frozen[d][i].eta_rb : frozen[d][i].eta);
        }
        for (double eta : lens_eta) {
            row.push_back(eta);
        }
        csv.row(row);
    }
}

void write_fig7(const RunConfig& config, std::ostream& out) {
    const AtomLine line = config.atom_line();
    const auto designs = near_concentric_designs(config);
    const ProtocolTimings timings = config.protocol_timings();
    const DetectionChain chain = config.detection_chain();

    std::vector<std::string> columns = {"d_crit_um"};
    for (const auto& d : designs) {
        columns.push_back("rate_" + d.name);
    }
    for (double na : config.lens_na) {
        columns.push_back("rate_lens_na" + format_double(na));
    }
    CsvWriter csv(out, columns);

    SweepSpec grid_spec;
    grid_spec.variable = SweepSpec::Variable::d_crit;
    grid_spec.lo = config.d_crit_sweep.d_crit_um_min * 1e-6;
    grid_spec.hi = config.d_crit_sweep.d_crit_um_max * 1e-6;
    grid_spec.points = config.d_crit_sweep.points;
    grid_spec.include = {config.d_crit_sweep.anchor_d_crit_um * 1e-6};

    // One rate_sweep evaluation covering every (design, d_crit) pair plus the
    // lens designs.
    std::vector<double> grid;
    {
        SweepSpec probe = grid_spec;
        probe.mirror_roc = designs.empty() ? 5e-3 : designs.front().mirror_roc_mm * 1e-3;
        probe.line = line;
        probe.policy = SweepSpec::ThighPolicy::fixed;
        probe.t_high = 1e-3;  // grid extraction only; rates come from rate_sweep
        for (const auto& row : sweep(probe)) {
            grid.push_back(row.x);
        }
    }
    std::vector<LinkDesign> link_designs;
    for (const auto& design : designs) {
        for (double d : grid) {
            LinkDesign ld;
            ld.name = design.name + "@" + format_double(d);
            ld.kind = LinkDesign::Kind::cavity;
            ld.mirror_roc = design.mirror_roc_mm * 1e-3;
            ld.d_crit = d;
            ld.t_low = config.t_low_ppm * 1e-6;
            ld.loss_rt = config.loss_rt_ppm * 1e-6;
            link_designs.push_back(std::move(ld));
        }
    }
    for (double na : config.lens_na) {
        LinkDesign ld;
        ld.name = "lens_na" + format_double(na);
        ld.kind = LinkDesign::Kind::lens;
        ld.na = na;
        link_designs.push_back(std::move(ld));
    }
    const std::vector<RateRow> rates = rate_sweep(link_designs, line, timings, chain);

    const std::size_t n_designs = designs.size();
    const std::size_t n_grid = grid.size();
    for (std::size_t i = 0; i < n_grid; ++i) {
        std::vector<std::optional<double>> row = {grid[i] * 1e6};
        for (std::size_t d = 0; d < n_designs; ++d) {
            const RateRow& r = rates[d * n_grid + i];
            row.push_back(r.valid ? std::optional<double>(r.rate) : std::nullopt);
        }
        for (std::size_t l = 0; l < config.lens_na.size(); ++l) {
            const RateRow& r = rates[n_designs * n_grid + l];
            row.push_back(r.valid ? std::optional<double>(r.rate) : std::nullopt);
        }
        csv.row(row);
    }
}

} // namespace

const std::vector<std::string>& figure_names() {
    static const std::vector<std::string> names = {"fig2", "fig3", "fig4", "fig6", "fig7"};
    return names;
}

void write_table2_csv(const RunConfig& config, std::ostream& out) {
    const AtomLine line = config.atom_line();
    const DetectionChain chain = config.detection_chain();
    CsvWriter csv(out, {"name", "length_mm", "mirror_roc_mm", "w0_um", "t_high_ppm",
                        "finesse", "cooperativity", "g_over_2pi_mhz",
                        "kappa_over_2pi_mhz", "gamma_over_2pi_mhz", "eta_rb", "p_aa"});
    for (const auto& design : config.cavities) {
        const CavityGeometry geom = design.geometry();
        const OptimizationResult opt =
            optimize_t_high(geom, config.t_low_ppm * 1e-6, config.loss_rt_ppm * 1e-6,
                            line, Objective::rb);
        const MirrorSet mirrors{opt.t_high_opt, config.t_low_ppm * 1e-6,
                                config.loss_rt_ppm * 1e-6};
        const CavityPoint point = evaluate_cavity(geom, mirrors, line);
        const double p_aa = p_atom_atom(point.eta_rb, chain);
        csv.text_row({design.name, format_double(design.length_mm),
                      format_double(design.mirror_roc_mm),
                      format_double(point.params.waist * 1e6),
                      format_double(opt.t_high_opt * 1e6),
                      format_double(point.params.finesse),
                      format_double(point.params.cooperativity),
                      format_double(point.params.g / two_pi / 1e6),
                      format_double(point.params.kappa_fwhm / two_pi / 1e6),
                      format_double(line.gamma_fwhm / two_pi / 1e6),
                      format_double(point.eta_rb), format_double(p_aa)});
    }
}

void write_figure_csv(const std::string& name, const RunConfig& config, std::ostream& out) {
    if (name == "fig2") {
        write_fig2(config, out);
    } else if (name == "fig3") {
        write_fig3(config, out);
    } else if (name == "fig4") {
        write_fig46(config, out, Objective::two_level);
    } else if (name == "fig6") {
        write_fig46(config, out, Objective::rb);
    } else if (name == "fig7") {
        write_fig7(config, out);
    } else {
        std::string valid;
        for (const auto& n : figure_names()) {
            valid += valid.empty() ? n : ", " + n;
        }
        throw ConfigError("unknown figure '" + name + "'; valid names: " + valid);
    }
}

void write_optimize_csv(const RunConfig& config, std::ostream& out) {
    const AtomLine line = config.atom_line();
    CsvWriter csv(out, {"name", "objective", "t_high_opt_ppm", "eta_opt", "evaluations"});
    for (const auto& design : config.cavities) {
        for (Objective objective : {Objective::two_level, Objective::rb}) {
            const OptimizationResult opt =
                optimize_t_high(design.geometry(), config.t_low_ppm * 1e-6,
                                config.loss_rt_ppm * 1e-6, line, objective);
            csv.text_row({design.name,
                          objective == Objective::rb ? "rb" : "two_level",
                          format_double(opt.t_high_opt * 1e6),
                          format_double(opt.eta_opt),
                          std::to_string(opt.evaluations)});
        }
    }
}

void write_budget_csv(const RunConfig& config, std::ostream& out) {
    const FidelityBudget budget = compose_budget(config.budget_entries());
    CsvWriter csv(out, {"name", "infidelity_percent"});
    for (const auto& entry : budget.entries) {
        csv.text_row({entry.name, format_double(entry.infidelity * 100.0)});
    }
    csv.text_row({"total", format_double(budget.total * 100.0)});
    csv.text_row({"multiplicative_fidelity", format_double(budget.multiplicative_fidelity)});
}

McResult write_simulate_csv(const RunConfig& config, std::ostream& out) {
    const DetectionChain chain = config.detection_chain();
    double p_aa = 0.0;
    if (config.simulate.p_aa_override) {
        p_aa = *config.simulate.p_aa_override;
    } else {
        const CavityDesignConfig& design = config.cavity_by_name(config.simulate.design);
        const AtomLine line = config.atom_line();
        const MirrorSet mirrors = design.mirrors(config.t_low_ppm, config.loss_rt_ppm);
        const double eta_rb =
            rb_efficiency(cqed_params(design.geometry(), mirrors, line), mirrors, line);
        p_aa = p_atom_atom(eta_rb, chain);
    }
    const McResult result = simulate(p_aa, config.protocol_timings(), chain,
                                     config.simulate.trials, config.simulate.seed);
    CsvWriter csv(out, {"p_aa", "trials", "seed", "mean_time_s", "rate_per_s",
                        "mean_attempts", "mean_epochs", "reload_events",
                        "ci95_halfwidth_s"});
    csv.text_row({format_double(p_aa), std::to_string(config.simulate.trials),
                  std::to_string(config.simulate.seed),
                  format_double(result.mean_time_to_entanglement),
                  format_double(result.rate), format_double(result.mean_attempts),
                  format_double(result.mean_epochs), std::to_string(result.reload_events),
                  format_double(result.confidence_halfwidth)});
    return result;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Photonic-link models for a two-node neutral-atom network"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    std::optional<double> p_aa_override;
    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--out", out_dir, "output directory for CSV files");
    app.add_option("--seed", seed, "Monte Carlo seed override");
    app.add_option("--trials", trials, "Monte Carlo trial-count override");
    app.add_option("--p-aa", p_aa_override, "entanglement probability override");

    CLI::App* cmd_table2 = app.add_subcommand("table2", "benchmark cavity-design summary");
    CLI::App* cmd_figure = app.add_subcommand("figure", "emit one figure dataset");
    std::string figure_name;
    cmd_figure->add_option("name", figure_name, "fig2|fig3|fig4|fig6|fig7")->required();
    CLI::App* cmd_simulate =
        app.add_subcommand("simulate", "Monte Carlo of the generation sequence");
    CLI::App* cmd_optimize =
        app.add_subcommand("optimize", "out-coupling transmission optimization");
    CLI::App* cmd_budget = app.add_subcommand("budget", "entanglement infidelity budget");
    for (CLI::App* sub : {cmd_table2, cmd_figure, cmd_simulate, cmd_optimize, cmd_budget}) {
        sub->fallthrough();
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        RunConfig config = config_path.empty() ? default_config() : load_config(config_path);
        if (seed) {
            config.simulate.seed = *seed;
        }
        if (trials) {
            config.simulate.trials = *trials;
        }
        if (p_aa_override) {
            config.simulate.p_aa_override = *p_aa_override;
        }
        config.validate();

        std::filesystem::create_directories(out_dir);
        auto emit = [&](const std::string& file, auto&& writer) {
            const std::filesystem::path path = std::filesystem::path(out_dir) / file;
            std::ofstream stream(path, std::ios::binary);
            if (!stream) {
                throw ConfigError("cannot open output file '" + path.string() + "'");
            }
            writer(stream);
            out << "wrote " << path.string() << "\n";
        };

        if (*cmd_table2) {
            emit("table2.csv", [&](std::ostream& s) { write_table2_csv(config, s); });
        } else if (*cmd_figure) {
            const auto& names = figure_names();
            if (std::find(names.begin(), names.end(), figure_name) == names.end()) {
                // Reuse the writer's diagnostic without creating any file.
                std::ostringstream sink;
                write_figure_csv(figure_name, config, sink);
            }
            emit(figure_name + ".csv",
                 [&](std::ostream& s) { write_figure_csv(figure_name, config, s); });
        } else if (*cmd_simulate) {
            McResult result;
            emit("simulate.csv",
                 [&](std::ostream& s) { result = write_simulate_csv(config, s); });
            out << "mean time to entanglement: "
                << format_double(result.mean_time_to_entanglement * 1e3) << " ms\n"
                << "rate: " << format_double(result.rate) << " 1/s\n"
                << "mean attempts: " << format_double(result.mean_attempts) << "\n"
                << "mean cooling epochs: " << format_double(result.mean_epochs) << "\n"
                << "reload events: " << result.reload_events << "\n";
        } else if (*cmd_optimize) {
            emit("optimize.csv", [&](std::ostream& s) { write_optimize_csv(config, s); });
        } else if (*cmd_budget) {
            emit("budget.csv", [&](std::ostream& s) { write_budget_csv(config, s); });
            const FidelityBudget budget = compose_budget(config.budget_entries());
            out << "additive infidelity total: " << format_double(budget.total * 100.0)
                << " %\n"
                << "multiplicative fidelity: "
                << format_double(budget.multiplicative_fidelity) << "\n";
            // Model cross-checks behind two of the budget entries.
            const CavityDesignConfig& design = config.cavity_by_name(config.simulate.design);
            const AtomLine line = config.atom_line();
            const MirrorSet mirrors = design.mirrors(config.t_low_ppm, config.loss_rt_ppm);
            const double overlap_err = temporal_overlap_error(
                cqed_params(design.geometry(), mirrors, line), line, 0.0, 100e-9);
            out << "temporal-overlap model (" << design.name
                << ", 100 nm displacement): "
                << format_double(overlap_err * 100.0) << " %\n";
            const double dephasing = dephasing_error(config.dephasing_delay_us * 1e-6,
                                                     config.t2_star_ms * 1e-3);
            out << "dephasing model (" << format_double(config.dephasing_delay_us)
                << " us, T2* " << format_double(config.t2_star_ms)
                << " ms): " << format_double(dephasing * 100.0) << " %\n";
        }
        return 0;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace qlink::cli
