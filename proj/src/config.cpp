#include "qlink/config.hpp"

#include "qlink/constants.hpp"
#include "qlink/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace qlink {

using nlohmann::json;

namespace {

// Accessor that tracks which keys were consumed so unknown keys can be
// reported with their full path.
class Section {
public:
    Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) {
            throw ConfigError(path_ + ": expected an object");
        }
    }

    ~Section() = default;

    bool has(const std::string& key) {
        seen_.insert(key);
        return node_.contains(key);
    }

    const json& at(const std::string& key) {
        seen_.insert(key);
        if (!node_.contains(key)) {
            throw ConfigError(path_ + "." + key + ": missing required key");
        }
        return node_.at(key);
    }

    double number(const std::string& key) {
        const json& v = at(key);
        if (!v.is_number()) {
            throw ConfigError(path_ + "." + key + ": expected a number");
        }
        return v.get<double>();
    }

    double number_or(const std::string& key, double fallback) {
        return has(key) ? number(key) : fallback;
    }

    std::int64_t integer(const std::string& key) {
        const json& v = at(key);
        if (!v.is_number_integer()) {
            throw ConfigError(path_ + "." + key + ": expected an integer");
        }
        return v.get<std::int64_t>();
    }

    std::string text(const std::string& key) {
        const json& v = at(key);
        if (!v.is_string()) {
            throw ConfigError(path_ + "." + key + ": expected a string");
        }
        return v.get<std::string>();
    }

    std::string subpath(const std::string& key) const { return path_ + "." + key; }

    void finish() const {
        for (auto it = node_.begin(); it != node_.end(); ++it) {
            if (!seen_.count(it.key())) {
                throw ConfigError(path_ + "." + it.key() + ": unknown key");
            }
        }
    }

private:
    const json& node_;
    std::string path_;
    std::set<std::string> seen_;
};

std::vector<double> number_array(const json& v, const std::string& path) {
    if (!v.is_array()) {
        throw ConfigError(path + ": expected an array of numbers");
    }
    std::vector<double> out;
    for (const auto& item : v) {
        if (!item.is_number()) {
            throw ConfigError(path + ": expected an array of numbers");
        }
        out.push_back(item.get<double>());
    }
    return out;
}

} // namespace

CavityGeometry CavityDesignConfig::geometry() const {
    return {length_mm * 1e-3, mirror_roc_mm * 1e-3};
}

MirrorSet CavityDesignConfig::mirrors(double t_low_ppm, double loss_rt_ppm) const {
    return {t_high_ppm * 1e-6, t_low_ppm * 1e-6, loss_rt_ppm * 1e-6};
}

AtomLine RunConfig::atom_line() const {
    return {wavelength_nm * 1e-9, constants::two_pi * gamma_over_2pi_mhz * 1e6};
}

DetectionChain RunConfig::detection_chain() const {
    DetectionChain chain;
    chain.detector_qe = detector_qe;
    chain.fiber_length_km = fiber_length_km;
    chain.attenuation_length_km = attenuation_length_km;
    return chain;
}

ProtocolTimings RunConfig::protocol_timings() const {
    ProtocolTimings t;
    t.t_load = t_load_ms * 1e-3;
    t.t_pump = t_pump_us * 1e-6;
    t.t_pi = t_pi_ns * 1e-9;
    t.t_det = t_det_us * 1e-6;
    t.t_cool = t_cool_us * 1e-6;
    t.n1 = n1;
    t.p_loss_per_block = p_loss_per_block;
    t.background_lifetime = background_lifetime_s;
    t.t_microwave = t_microwave_us * 1e-6;
    t.t_rotation = t_rotation_us * 1e-6;
    t.t_measure = t_measure_ms * 1e-3;
    return t;
}

std::vector<BudgetEntry> RunConfig::budget_entries() const {
    std::vector<BudgetEntry> entries;
    entries.reserve(budget_percent.size());
    for (const auto& e : budget_percent) {
        entries.push_back({e.name, e.percent / 100.0});
    }
    return entries;
}

const CavityDesignConfig& RunConfig::cavity_by_name(const std::string& name) const {
    for (const auto& c : cavities) {
        if (c.name == name) {
            return c;
        }
    }
    throw ConfigError("cavities: no design named '" + name + "'");
}

void RunConfig::validate() const {
    if (!(wavelength_nm > 0.0) || !(gamma_over_2pi_mhz > 0.0)) {
        throw ConfigError("atom: wavelength and linewidth must be positive");
    }
    if (cavities.empty()) {
        throw ConfigError("cavities: at least one cavity design is required");
    }
    for (const auto& c : cavities) {
        try {
            c.geometry().validate();
            c.mirrors(t_low_ppm, loss_rt_ppm).validate();
        } catch (const std::exception& e) {
            throw ConfigError("cavities." + c.name + ": " + e.what());
        }
    }
    for (double na : lens_na) {
        if (!(na > 0.0) || !(na < 1.0)) {
            throw ConfigError("lens_na: values must lie in (0, 1)");
        }
    }
    try {
        detection_chain().validate();
        protocol_timings().validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    for (const auto& e : budget_percent) {
        if (e.percent < 0.0 || e.percent > 100.0) {
            throw ConfigError("budget_percent." + e.name + ": must lie in [0, 100]");
        }
    }
    if (!(fig2.na_min > 0.0) || !(fig2.na_max < 1.0) || !(fig2.na_min < fig2.na_max) ||
        fig2.points < 2) {
        throw ConfigError("sweeps.fig2: requires 0 < na_min < na_max < 1 and points >= 2");
    }
    if (fig3.lengths_mm.empty() || fig3.points < 2 ||
        !(fig3.t_high_ppm_min < fig3.t_high_ppm_max)) {
        throw ConfigError("sweeps.fig3: invalid sweep specification");
    }
    if (!(d_crit_sweep.d_crit_um_min > 0.0) ||
        !(d_crit_sweep.d_crit_um_min < d_crit_sweep.d_crit_um_max) ||
        d_crit_sweep.points < 2) {
        throw ConfigError("sweeps.d_crit: invalid sweep specification");
    }
    if (simulate.trials < 1) {
        throw ConfigError("simulate.trials: must be at least 1");
    }
    if (simulate.p_aa_override &&
        (!(*simulate.p_aa_override > 0.0) || *simulate.p_aa_override > 1.0)) {
        throw ConfigError("simulate.p_aa_override: must lie in (0, 1]");
    }
    if (!simulate.p_aa_override) {
        cavity_by_name(simulate.design);
    }
}

RunConfig default_config() {
    RunConfig config;
    config.cavities = {
        {"short-confocal", 0.15, 0.15, 1540.0},
        {"medium-near-concentric", 3.99, 2.0, 4620.0},
        {"long-near-concentric", 9.99, 5.0, 5730.0},
    };
    config.budget_percent = {
        {"temporal photon overlap", 5.0},
        {"spatial photon overlap", 1.0},
        {"beamsplitter and waveplates", 0.2},
        {"atom qubit rotation", 2.0},
        {"atom state readout", 6.0},
        {"atom qubit dephasing", 0.0},
        {"detector dark counts", 0.0},
        {"multi-photon scattering", 0.0},
        {"off-resonant excitation", 0.0},
    };
    return config;
}

RunConfig parse_config(const std::string& json_text) {
    json root_json;
    try {
        root_json = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }

    RunConfig config = default_config();
    Section root(root_json, "config");

    if (root.has("atom")) {
        Section atom(root.at("atom"), root.subpath("atom"));
        config.wavelength_nm = atom.number_or("wavelength_nm", config.wavelength_nm);
        config.gamma_over_2pi_mhz =
            atom.number_or("gamma_over_2pi_mhz", config.gamma_over_2pi_mhz);
        atom.finish();
    }
    if (root.has("mirrors")) {
        Section mirrors(root.at("mirrors"), root.subpath("mirrors"));
        config.t_low_ppm = mirrors.number_or("t_low_ppm", config.t_low_ppm);
        config.loss_rt_ppm = mirrors.number_or("loss_rt_ppm", config.loss_rt_ppm);
        mirrors.finish();
    }
    if (root.has("cavities")) {
        const json& arr = root.at("cavities");
        if (!arr.is_array()) {
            throw ConfigError("config.cavities: expected an array");
        }
        config.cavities.clear();
        int index = 0;
        for (const auto& item : arr) {
            Section cavity(item, "config.cavities[" + std::to_string(index) + "]");
            CavityDesignConfig design;
            design.name = cavity.text("name");
            design.length_mm = cavity.number("length_mm");
            design.mirror_roc_mm = cavity.number("mirror_roc_mm");
            design.t_high_ppm = cavity.number("t_high_ppm");
            cavity.finish();
            config.cavities.push_back(std::move(design));
            ++index;
        }
    }
    if (root.has("lens_na")) {
        config.lens_na = number_array(root.at("lens_na"), "config.lens_na");
    }
    if (root.has("detection")) {
        Section det(root.at("detection"), root.subpath("detection"));
        config.detector_qe = det.number_or("detector_qe", config.detector_qe);
        config.fiber_length_km = det.number_or("fiber_length_km", config.fiber_length_km);
        config.attenuation_length_km =
            det.number_or("attenuation_length_km", config.attenuation_length_km);
        det.finish();
    }
    if (root.has("timings")) {
        Section t(root.at("timings"), root.subpath("timings"));
        config.t_load_ms = t.number_or("t_load_ms", config.t_load_ms);
        config.t_pump_us = t.number_or("t_pump_us", config.t_pump_us);
        config.t_pi_ns = t.number_or("t_pi_ns", config.t_pi_ns);
        config.t_det_us = t.number_or("t_det_us", config.t_det_us);
        config.t_cool_us = t.number_or("t_cool_us", config.t_cool_us);
        if (t.has("n1")) {
            config.n1 = static_cast<int>(t.integer("n1"));
        }
        config.p_loss_per_block = t.number_or("p_loss_per_block", config.p_loss_per_block);
        config.background_lifetime_s =
            t.number_or("background_lifetime_s", config.background_lifetime_s);
        t.finish();
    }
    if (root.has("verification")) {
        Section v(root.at("verification"), root.subpath("verification"));
        config.t_microwave_us = v.number_or("t_microwave_us", config.t_microwave_us);
        config.t_rotation_us = v.number_or("t_rotation_us", config.t_rotation_us);
        config.t_measure_ms = v.number_or("t_measure_ms", config.t_measure_ms);
        v.finish();
    }
    if (root.has("budget_percent")) {
        const json& arr = root.at("budget_percent");
        if (!arr.is_array()) {
            throw ConfigError("config.budget_percent: expected an array");
        }
        config.budget_percent.clear();
        int index = 0;
        for (const auto& item : arr) {
            Section entry(item, "config.budget_percent[" + std::to_string(index) + "]");
            config.budget_percent.push_back({entry.text("name"), entry.number("percent")});
            entry.finish();
            ++index;
        }
    }
    if (root.has("dephasing")) {
        Section d(root.at("dephasing"), root.subpath("dephasing"));
        config.dephasing_delay_us = d.number_or("delay_us", config.dephasing_delay_us);
        config.t2_star_ms = d.number_or("t2_star_ms", config.t2_star_ms);
        d.finish();
    }
    if (root.has("sweeps")) {
        Section sweeps(root.at("sweeps"), root.subpath("sweeps"));
        if (sweeps.has("fig2")) {
            Section f(sweeps.at("fig2"), sweeps.subpath("fig2"));
            config.fig2.na_min = f.number_or("na_min", config.fig2.na_min);
            config.fig2.na_max = f.number_or("na_max", config.fig2.na_max);
            if (f.has("points")) {
                config.fig2.points = static_cast<int>(f.integer("points"));
            }
            f.finish();
        }
        if (sweeps.has("fig3")) {
            Section f(sweeps.at("fig3"), sweeps.subpath("fig3"));
            if (f.has("lengths_mm")) {
                config.fig3.lengths_mm =
                    number_array(f.at("lengths_mm"), f.subpath("lengths_mm"));
            }
            config.fig3.d_crit_um = f.number_or("d_crit_um", config.fig3.d_crit_um);
            config.fig3.t_high_ppm_min =
                f.number_or("t_high_ppm_min", config.fig3.t_high_ppm_min);
            config.fig3.t_high_ppm_max =
                f.number_or("t_high_ppm_max", config.fig3.t_high_ppm_max);
            if (f.has("points")) {
                config.fig3.points = static_cast<int>(f.integer("points"));
            }
            f.finish();
        }
        if (sweeps.has("d_crit")) {
            Section f(sweeps.at("d_crit"), sweeps.subpath("d_crit"));
            config.d_crit_sweep.d_crit_um_min =
                f.number_or("d_crit_um_min", config.d_crit_sweep.d_crit_um_min);
            config.d_crit_sweep.d_crit_um_max =
                f.number_or("d_crit_um_max", config.d_crit_sweep.d_crit_um_max);
            if (f.has("points")) {
                config.d_crit_sweep.points = static_cast<int>(f.integer("points"));
            }
            config.d_crit_sweep.anchor_d_crit_um =
                f.number_or("anchor_d_crit_um", config.d_crit_sweep.anchor_d_crit_um);
            f.finish();
        }
        sweeps.finish();
    }
    if (root.has("simulate")) {
        Section s(root.at("simulate"), root.subpath("simulate"));
        if (s.has("trials")) {
            config.simulate.trials = static_cast<std::uint64_t>(s.integer("trials"));
        }
        if (s.has("seed")) {
            config.simulate.seed = static_cast<std::uint64_t>(s.integer("seed"));
        }
        if (s.has("design")) {
            config.simulate.design = s.text("design");
        }
        if (s.has("p_aa_override")) {
            config.simulate.p_aa_override = s.number("p_aa_override");
        }
        s.finish();
    }
    root.finish();

    config.validate();
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open '" + path + "'");
    }
    std::ostringstream oss;
    oss << in.rdbuf();
    return parse_config(oss.str());
}

std::string serialize_config(const RunConfig& config) {
    json root;
    root["atom"] = {{"wavelength_nm", config.wavelength_nm},
                    {"gamma_over_2pi_mhz", config.gamma_over_2pi_mhz}};
    root["mirrors"] = {{"t_low_ppm", config.t_low_ppm},
                       {"loss_rt_ppm", config.loss_rt_ppm}};
    root["cavities"] = json::array();
    for (const auto& c : config.cavities) {
        root["cavities"].push_back({{"name", c.name},
                                    {"length_mm", c.length_mm},
                                    {"mirror_roc_mm", c.mirror_roc_mm},
                                    {"t_high_ppm", c.t_high_ppm}});
    }
    root["lens_na"] = config.lens_na;
    root["detection"] = {{"detector_qe", config.detector_qe},
                         {"fiber_length_km", config.fiber_length_km},
                         {"attenuation_length_km", config.attenuation_length_km}};
    root["timings"] = {{"t_load_ms", config.t_load_ms},
                       {"t_pump_us", config.t_pump_us},
                       {"t_pi_ns", config.t_pi_ns},
                       {"t_det_us", config.t_det_us},
                       {"t_cool_us", config.t_cool_us},
                       {"n1", config.n1},
                       {"p_loss_per_block", config.p_loss_per_block},
                       {"background_lifetime_s", config.background_lifetime_s}};
    root["verification"] = {{"t_microwave_us", config.t_microwave_us},
                            {"t_rotation_us", config.t_rotation_us},
                            {"t_measure_ms", config.t_measure_ms}};
    root["budget_percent"] = json::array();
    for (const auto& e : config.budget_percent) {
        root["budget_percent"].push_back({{"name", e.name}, {"percent", e.percent}});
    }
    root["dephasing"] = {{"delay_us", config.dephasing_delay_us},
                         {"t2_star_ms", config.t2_star_ms}};
    root["sweeps"] = {
        {"fig2",
         {{"na_min", config.fig2.na_min},
          {"na_max", config.fig2.na_max},
          {"points", config.fig2.points}}},
        {"fig3",
         {{"lengths_mm", config.fig3.lengths_mm},
          {"d_crit_um", config.fig3.d_crit_um},
          {"t_high_ppm_min", config.fig3.t_high_ppm_min},
          {"t_high_ppm_max", config.fig3.t_high_ppm_max},
          {"points", config.fig3.points}}},
        {"d_crit",
         {{"d_crit_um_min", config.d_crit_sweep.d_crit_um_min},
          {"d_crit_um_max", config.d_crit_sweep.d_crit_um_max},
          {"points", config.d_crit_sweep.points},
          {"anchor_d_crit_um", config.d_crit_sweep.anchor_d_crit_um}}}};
    root["simulate"] = {{"trials", config.simulate.trials},
                        {"seed", config.simulate.seed},
                        {"design", config.simulate.design}};
    if (config.simulate.p_aa_override) {
        root["simulate"]["p_aa_override"] = *config.simulate.p_aa_override;
    }
    return root.dump(2) + "\n";
}

} // namespace qlink
