// Command-line front end: Stark-tuned Foerster resonance spectra for small
// Rydberg-atom ensembles and the detection post-selection transform.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "foerster/commands.hpp"

namespace {

using foerster::RunConfig;
using nlohmann::json;

/// One CLI flag worth of state: where it lands in RunConfig and its JSON
/// config-file key. Precedence is defaults < config file < explicit flags.
struct FlagBinding {
    std::string flag;
    std::string key;
    std::function<void(RunConfig&, const RunConfig&)> copy;
};

struct CommonOptions {
    RunConfig cli;  // parse target, preloaded with defaults
    std::string config_file;
    std::vector<FlagBinding> bindings;
};

void apply_json_config(RunConfig& config, const json& j, const std::string& path) {
    try {
        if (j.contains("i")) {
            if (j["i"].is_array()) {
                config.atom_counts = j["i"].get<std::vector<int>>();
            } else {
                config.atom_counts = {j["i"].get<int>()};
            }
        }
        if (j.contains("t0")) config.t0_us = j["t0"].get<double>();
        if (j.contains("L")) config.cube_side_um = j["L"].get<double>();
        if (j.contains("realizations")) config.realizations = j["realizations"].get<int>();
        if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("c3")) config.constants.c3_forster = j["c3"].get<double>();
        if (j.contains("c3_exchange_s"))
            config.constants.c3_exchange_s = j["c3_exchange_s"].get<double>();
        if (j.contains("c3_exchange_sp"))
            config.constants.c3_exchange_sp = j["c3_exchange_sp"].get<double>();
        if (j.contains("nbar")) config.chain.n_bar = j["nbar"].get<double>();
        if (j.contains("T")) config.chain.efficiency = j["T"].get<double>();
        if (j.contains("p32")) config.chain.p32 = j["p32"].get<double>();
        if (j.contains("rho_bg")) config.chain.rho_bg = j["rho_bg"].get<double>();
        if (j.contains("imax")) config.chain.i_max = j["imax"].get<int>();
        if (j.contains("fres")) config.stark.resonance_field_vcm = j["fres"].get<double>();
        if (j.contains("slope")) config.stark.slope_mhz_per_vcm = j["slope"].get<double>();
        if (j.contains("grid_min")) config.grid_min = j["grid_min"].get<double>();
        if (j.contains("grid_max")) config.grid_max = j["grid_max"].get<double>();
        if (j.contains("grid_step")) config.grid_step = j["grid_step"].get<double>();
        if (j.contains("workers")) config.workers = j["workers"].get<int>();
        if (j.contains("out")) config.out_dir = j["out"].get<std::string>();
    } catch (const json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void add_common_options(CLI::App* sub, CommonOptions& opts) {
    auto bind = [&opts](CLI::Option* option, const std::string& key, auto copy) {
        opts.bindings.push_back({option->get_name(), key, copy});
    };

    bind(sub->add_option("--i", opts.cli.atom_counts,
                         "Atom count(s) to simulate (repeatable, 1..8)"),
         "i", [](RunConfig& c, const RunConfig& v) { c.atom_counts = v.atom_counts; });
    bind(sub->add_option("--t0", opts.cli.t0_us, "Interaction time, us"), "t0",
         [](RunConfig& c, const RunConfig& v) { c.t0_us = v.t0_us; });
    bind(sub->add_option("--L", opts.cli.cube_side_um, "Excitation cube side, um"), "L",
         [](RunConfig& c, const RunConfig& v) { c.cube_side_um = v.cube_side_um; });
    bind(sub->add_option("--realizations", opts.cli.realizations,
                         "Monte-Carlo realizations per spectrum"),
         "realizations", [](RunConfig& c, const RunConfig& v) { c.realizations = v.realizations; });
    bind(sub->add_option("--seed", opts.cli.seed, "Master seed (64-bit)"), "seed",
         [](RunConfig& c, const RunConfig& v) { c.seed = v.seed; });
    bind(sub->add_option("--c3", opts.cli.constants.c3_forster,
                         "Foerster C3 constant, MHz*um^3"),
         "c3", [](RunConfig& c, const RunConfig& v) { c.constants.c3_forster = v.constants.c3_forster; });
    bind(sub->add_option("--c3-exchange-s", opts.cli.constants.c3_exchange_s,
                         "Exchange C3 for the 37S channel, MHz*um^3"),
         "c3_exchange_s",
         [](RunConfig& c, const RunConfig& v) { c.constants.c3_exchange_s = v.constants.c3_exchange_s; });
    bind(sub->add_option("--c3-exchange-sp", opts.cli.constants.c3_exchange_sp,
                         "Exchange C3 for the 38S channel, MHz*um^3"),
         "c3_exchange_sp",
         [](RunConfig& c, const RunConfig& v) { c.constants.c3_exchange_sp = v.constants.c3_exchange_sp; });
    bind(sub->add_option("--nbar", opts.cli.chain.n_bar, "Mean Rydberg atoms excited per pulse"),
         "nbar", [](RunConfig& c, const RunConfig& v) { c.chain.n_bar = v.chain.n_bar; });
    bind(sub->add_option("--T", opts.cli.chain.efficiency, "Detection efficiency, (0, 1]"), "T",
         [](RunConfig& c, const RunConfig& v) { c.chain.efficiency = v.chain.efficiency; });
    bind(sub->add_option("--p32", opts.cli.chain.p32, "37P3/2 excitation probability"), "p32",
         [](RunConfig& c, const RunConfig& v) { c.chain.p32 = v.chain.p32; });
    bind(sub->add_option("--rho-bg", opts.cli.chain.rho_bg, "Nonresonant background level"),
         "rho_bg", [](RunConfig& c, const RunConfig& v) { c.chain.rho_bg = v.chain.rho_bg; });
    bind(sub->add_option("--imax", opts.cli.chain.i_max, "Multiplicity truncation order (2..8)"),
         "imax", [](RunConfig& c, const RunConfig& v) { c.chain.i_max = v.chain.i_max; });
    bind(sub->add_option("--fres", opts.cli.stark.resonance_field_vcm,
                         "Resonance electric field, V/cm"),
         "fres",
         [](RunConfig& c, const RunConfig& v) { c.stark.resonance_field_vcm = v.stark.resonance_field_vcm; });
    bind(sub->add_option("--slope", opts.cli.stark.slope_mhz_per_vcm,
                         "Stark slope, MHz per V/cm"),
         "slope",
         [](RunConfig& c, const RunConfig& v) { c.stark.slope_mhz_per_vcm = v.stark.slope_mhz_per_vcm; });
    bind(sub->add_option("--grid-min", opts.cli.grid_min,
                         "Grid minimum (MHz; V/cm for fieldscan)"),
         "grid_min", [](RunConfig& c, const RunConfig& v) { c.grid_min = v.grid_min; });
    bind(sub->add_option("--grid-max", opts.cli.grid_max,
                         "Grid maximum (MHz; V/cm for fieldscan)"),
         "grid_max", [](RunConfig& c, const RunConfig& v) { c.grid_max = v.grid_max; });
    bind(sub->add_option("--grid-step", opts.cli.grid_step,
                         "Grid step (MHz; V/cm for fieldscan)"),
         "grid_step", [](RunConfig& c, const RunConfig& v) { c.grid_step = v.grid_step; });
    bind(sub->add_option("--workers", opts.cli.workers,
                         "Worker threads (0 = hardware concurrency)"),
         "workers", [](RunConfig& c, const RunConfig& v) { c.workers = v.workers; });
    bind(sub->add_option("--out", opts.cli.out_dir, "Output directory"), "out",
         [](RunConfig& c, const RunConfig& v) { c.out_dir = v.out_dir; });
    sub->add_option("--config", opts.config_file,
                    "JSON config file; explicit flags override its values");
}

/// defaults -> config file -> explicitly passed flags.
RunConfig merge_config(const CLI::App* sub, const CommonOptions& opts, RunConfig defaults) {
    RunConfig merged = std::move(defaults);
    if (!opts.config_file.empty()) {
        std::ifstream in(opts.config_file);
        if (!in) {
            throw std::runtime_error("cannot open config file " + opts.config_file);
        }
        json j;
        try {
            j = json::parse(in);
        } catch (const json::exception& e) {
            throw std::runtime_error(opts.config_file + ": " + e.what());
        }
        apply_json_config(merged, j, opts.config_file);
    }
    for (const auto& binding : opts.bindings) {
        if (sub->count(binding.flag) > 0) {
            binding.copy(merged, opts.cli);
        }
    }
    return merged;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stark-tuned Foerster resonance spectra for 2-8 interacting Rydberg atoms"};
    app.set_version_flag("--version", foerster::kArtifactVersion);
    app.require_subcommand(1);

    std::map<std::string, CommonOptions> options;
    const std::vector<std::string> names = {"spectrum",  "detect",        "histogram",
                                            "fieldscan", "reproduce-fig2", "reproduce-fig3"};
    const std::map<std::string, std::string> descriptions = {
        {"spectrum", "Simulate ideal rho_i spectra and write CSVs"},
        {"detect", "Transform rho_i into post-selected S_N signals"},
        {"histogram", "Interacting-atom-number weights behind each S_N"},
        {"fieldscan", "S_N against the dc electric field via the Stark map"},
        {"reproduce-fig2", "rho_2..rho_5 at the bundled defaults"},
        {"reproduce-fig3", "Full detection chain at the bundled defaults"},
    };
    for (const auto& name : names) {
        CLI::App* sub = app.add_subcommand(name, descriptions.at(name));
        add_common_options(sub, options[name]);
    }

    double alpha = 0.0;
    double n_bar_t = 0.0;
    CLI::App* calibrate =
        app.add_subcommand("calibrate", "Derive n_bar and T from alpha and n_bar*T");
    calibrate->add_option("alpha", alpha, "Measured amplitude ratio (S1-rho)/(S2-rho)")
        ->required();
    calibrate->add_option("nbar_t", n_bar_t, "Measured mean detected count n_bar*T")->required();

    std::string lineshape_input;
    std::string lineshape_out;
    CLI::App* lineshape =
        app.add_subcommand("lineshape", "Width/amplitude/Lorentz metrics for a spectrum CSV");
    lineshape->add_option("input", lineshape_input, "Spectrum CSV to analyze")->required();
    lineshape->add_option("--out", lineshape_out, "Directory for the fit CSV (default: input's)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (calibrate->parsed()) {
            foerster::cmd_calibrate(alpha, n_bar_t);
            return 0;
        }
        if (lineshape->parsed()) {
            const std::filesystem::path input(lineshape_input);
            const std::filesystem::path out =
                lineshape_out.empty() ? (input.has_parent_path() ? input.parent_path()
                                                                 : std::filesystem::path("."))
                                      : std::filesystem::path(lineshape_out);
            foerster::cmd_lineshape(input, out);
            return 0;
        }
        for (const auto& name : names) {
            CLI::App* sub = app.get_subcommand(name);
            if (!sub->parsed()) {
                continue;
            }
            const RunConfig defaults =
                name == "fieldscan" ? foerster::fieldscan_defaults() : RunConfig{};
            const RunConfig config = merge_config(sub, options.at(name), defaults);
            if (name == "spectrum") {
                foerster::cmd_spectrum(config);
            } else if (name == "detect") {
                foerster::cmd_detect(config);
            } else if (name == "histogram") {
                foerster::cmd_histogram(config);
            } else if (name == "fieldscan") {
                foerster::cmd_fieldscan(config);
            } else if (name == "reproduce-fig2") {
                foerster::cmd_reproduce_fig2(config);
            } else if (name == "reproduce-fig3") {
                foerster::cmd_reproduce_fig3(config);
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
