#include "foerster/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "foerster/csv.hpp"

namespace foerster {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string rho_filename(int atom_count) {
    return "rho_i" + std::to_string(atom_count) + ".csv";
}

std::string sn_filename(int detected_count) {
    return "s_" + std::to_string(detected_count) + ".csv";
}

csv::Table spectrum_table(const Spectrum& spec) {
    csv::Table table;
    table.header = {"detuning_mhz", "rho", "stderr"};
    table.rows.reserve(spec.size());
    for (std::size_t d = 0; d < spec.size(); ++d) {
        table.rows.push_back({spec.detunings_mhz[d], spec.values[d], spec.stderrs[d]});
    }
    return table;
}

Spectrum read_spectrum_csv(const fs::path& path) {
    const csv::Table table = csv::read(path);
    if (table.header != std::vector<std::string>{"detuning_mhz", "rho", "stderr"}) {
        throw std::runtime_error(path.string() + ": expected header detuning_mhz,rho,stderr");
    }
    Spectrum spec;
    for (const auto& row : table.rows) {
        if (row.size() != 3) {
            throw std::runtime_error(path.string() + ": expected 3 columns per row");
        }
        spec.detunings_mhz.push_back(row[0]);
        spec.values.push_back(row[1]);
        spec.stderrs.push_back(row[2]);
    }
    spec.meta.detunings_mhz = spec.detunings_mhz;
    return spec;
}

json constants_json(const CouplingConstants& c) {
    return {{"c3_forster_mhz_um3", c.c3_forster},
            {"c3_exchange_s_mhz_um3", c.c3_exchange_s},
            {"c3_exchange_sp_mhz_um3", c.c3_exchange_sp}};
}

json chain_json(const DetectionChain& chain) {
    return {{"n_bar", chain.n_bar},       {"efficiency", chain.efficiency},
            {"rho_bg", chain.rho_bg},     {"p32", chain.p32},
            {"i_max", chain.i_max},       {"lambda", chain.lambda()}};
}

json base_sidecar(const RunConfig& config, const std::string& command, const char* grid_unit) {
    json meta;
    meta["command"] = command;
    meta["version"] = kArtifactVersion;
    meta["seed"] = config.seed;
    meta["parameters"] = {{"t0_us", config.t0_us},
                          {"cube_side_um", config.cube_side_um},
                          {"realizations", config.realizations},
                          {"couplings", constants_json(config.constants)}};
    meta["grid"] = {{"min", config.grid_min},
                    {"max", config.grid_max},
                    {"step", config.grid_step},
                    {"unit", grid_unit}};
    return meta;
}

void write_sidecar(const fs::path& path, const json& meta) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << meta.dump(2) << '\n';
}

/// rho spectra keyed by atom count, as an i = 2..i_max list.
std::vector<Spectrum> rho_list(const std::map<int, Spectrum>& rho, int i_max) {
    std::vector<Spectrum> list;
    list.reserve(static_cast<std::size_t>(i_max - 1));
    for (int i = 2; i <= i_max; ++i) {
        list.push_back(rho.at(i));
    }
    return list;
}

std::map<int, Spectrum> simulate_rho_set(const RunConfig& config, const std::vector<int>& counts,
                                         const std::vector<double>& grid) {
    std::map<int, Spectrum> rho;
    for (const int i : counts) {
        SpectrumRequest request;
        request.atom_count = i;
        request.detunings_mhz = grid;
        request.t0_us = config.t0_us;
        request.cube_side_um = config.cube_side_um;
        request.n_realizations = config.realizations;
        request.constants = config.constants;
        request.seed = config.seed;
        rho.emplace(i, simulate_spectrum(request, config.workers));
    }
    return rho;
}

struct ChainOutputs {
    std::map<int, Spectrum> s_n;
    std::map<int, double> tail_mass;
};

/// Fine-structure mixing followed by the detection mixture, for every
/// detected count N = 1..min(5, i_max).
ChainOutputs run_chain(const std::map<int, Spectrum>& rho, const DetectionChain& chain) {
    const std::vector<Spectrum> rho_k = rho_list(rho, chain.i_max);
    std::vector<Spectrum> rho_tilde;
    rho_tilde.reserve(rho_k.size());
    for (int i = 2; i <= chain.i_max; ++i) {
        rho_tilde.push_back(fine_structure_mix(rho_k, i, chain.p32).spectrum);
    }

    ChainOutputs out;
    for (int n = 1; n <= std::min(5, chain.i_max); ++n) {
        DetectionMix mix = detection_mix(rho_tilde, chain, n);
        if (mix.tail_warning) {
            std::cerr << "warning: S_" << n << " drops Poisson tail mass "
                      << csv::format_double(mix.poisson_tail_mass)
                      << " (> 1e-3): i_max = " << chain.i_max << " is small for N = " << n
                      << "\n";
        }
        out.tail_mass[n] = mix.poisson_tail_mass;
        out.s_n.emplace(n, std::move(mix.spectrum));
    }
    return out;
}

void write_histogram_csv(const fs::path& path, const std::map<int, InteractionHistogram>& hists) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << "n,k,weight\n";
    for (const auto& [n, hist] : hists) {
        out << n << ",none," << csv::format_double(hist.none_weight) << '\n';
        for (std::size_t j = 0; j < hist.resonant_weights.size(); ++j) {
            out << n << ',' << (j + 2) << ',' << csv::format_double(hist.resonant_weights[j])
                << '\n';
        }
    }
}

}  // namespace

RunConfig fieldscan_defaults() {
    RunConfig config;
    config.grid_min = 1.74;
    config.grid_max = 1.84;
    config.grid_step = 0.001;
    return config;
}

void validate_config(const RunConfig& config, bool grid_is_field) {
    std::vector<std::string> problems;

    if (config.atom_counts.empty()) {
        problems.push_back("--i: at least one atom count is required");
    }
    int largest = config.chain.i_max;
    for (const int i : config.atom_counts) {
        if (i < 1 || i > kMaxAtomCount) {
            problems.push_back("--i: atom count " + std::to_string(i) + " outside [1, " +
                               std::to_string(kMaxAtomCount) + "] (collective basis bound)");
        } else {
            largest = std::max(largest, i);
        }
    }
    if (config.t0_us < 0.0) {
        problems.push_back("--t0: interaction time must be >= 0, got " +
                           std::to_string(config.t0_us));
    }
    if (!(config.cube_side_um > 0.0)) {
        problems.push_back("--L: cube side must be positive, got " +
                           std::to_string(config.cube_side_um));
    } else if (largest >= 2) {
        // Keep the per-configuration rejection estimate at or below 1/2 so
        // position sampling cannot run out of attempts mid-run.
        const double pairs = 0.5 * largest * (largest - 1);
        const double exclusion = pairs * (4.0 / 3.0) * std::numbers::pi *
                                 std::pow(kMinPairSeparationUm, 3);
        if (std::pow(config.cube_side_um, 3) < 2.0 * exclusion) {
            problems.push_back("--L: cube side " + std::to_string(config.cube_side_um) +
                               " um too small for " + std::to_string(largest) +
                               " atoms with the " + std::to_string(kMinPairSeparationUm) +
                               " um pair-separation floor");
        }
    }
    if (config.realizations < 1) {
        problems.push_back("--realizations: must be >= 1, got " +
                           std::to_string(config.realizations));
    }
    if (!(config.grid_step > 0.0)) {
        problems.push_back("--grid-step: must be positive, got " +
                           std::to_string(config.grid_step));
    }
    if (!std::isfinite(config.grid_min) || !std::isfinite(config.grid_max)) {
        problems.push_back("--grid-min/--grid-max: grid bounds must be finite");
    } else if (config.grid_max < config.grid_min) {
        problems.push_back("--grid-min/--grid-max: empty grid (min " +
                           std::to_string(config.grid_min) + " exceeds max " +
                           std::to_string(config.grid_max) + ")");
    } else if (config.grid_step > 0.0 &&
               (config.grid_max - config.grid_min) / config.grid_step > 1e6) {
        problems.push_back("--grid-step: grid would exceed 1e6 points");
    }

    if (config.chain.n_bar < 0.0) {
        problems.push_back("--nbar: must be >= 0, got " + std::to_string(config.chain.n_bar));
    }
    if (!(config.chain.efficiency > 0.0) || config.chain.efficiency > 1.0) {
        problems.push_back("--T: detection efficiency must be in (0, 1], got " +
                           std::to_string(config.chain.efficiency));
    }
    if (config.chain.p32 < 0.0 || config.chain.p32 > 1.0) {
        problems.push_back("--p32: must be in [0, 1], got " + std::to_string(config.chain.p32));
    }
    if (config.chain.rho_bg < 0.0) {
        problems.push_back("--rho-bg: must be >= 0, got " + std::to_string(config.chain.rho_bg));
    }
    if (config.chain.i_max < 2 || config.chain.i_max > kMaxAtomCount) {
        problems.push_back("--imax: must be in [2, " + std::to_string(kMaxAtomCount) +
                           "] (rho_i needs a simulable basis), got " +
                           std::to_string(config.chain.i_max));
    }
    if (config.stark.slope_mhz_per_vcm == 0.0) {
        problems.push_back("--slope: Stark slope must be nonzero");
    }
    if (!(config.stark.resonance_field_vcm > 0.0)) {
        problems.push_back("--fres: resonance field must be positive, got " +
                           std::to_string(config.stark.resonance_field_vcm));
    }
    if (grid_is_field && config.grid_max >= config.grid_min) {
        const double lo = config.stark.resonance_field_vcm - kStarkWindowVcm;
        const double hi = config.stark.resonance_field_vcm + kStarkWindowVcm;
        if (config.grid_min < lo || config.grid_max > hi) {
            problems.push_back("--grid-min/--grid-max: field grid extends outside the linear "
                               "Stark window [" +
                               std::to_string(lo) + ", " + std::to_string(hi) + "] V/cm");
        }
    }
    if (config.out_dir.empty()) {
        problems.push_back("--out: output directory is required");
    }

    if (!problems.empty()) {
        std::string message = "invalid configuration:";
        for (const auto& p : problems) {
            message += "\n  - " + p;
        }
        throw std::invalid_argument(message);
    }
}

SpectrumOutputs cmd_spectrum(const RunConfig& config) {
    validate_config(config);
    fs::create_directories(config.out_dir);

    const std::vector<double> grid =
        detuning_grid(config.grid_min, config.grid_max, config.grid_step);
    std::vector<int> counts(config.atom_counts);
    std::sort(counts.begin(), counts.end());
    counts.erase(std::unique(counts.begin(), counts.end()), counts.end());

    SpectrumOutputs outputs;
    outputs.spectra = simulate_rho_set(config, counts, grid);

    for (const int i : counts) {
        const Spectrum& spec = outputs.spectra.at(i);
        const fs::path path = config.out_dir / rho_filename(i);
        csv::write(path, spectrum_table(spec));
        outputs.files.push_back(path);
        const double peak = *std::max_element(spec.values.begin(), spec.values.end());
        std::cout << "wrote " << path.string() << " (peak rho = " << csv::format_double(peak)
                  << ")\n";
    }

    csv::Table combined;
    combined.header = {"detuning_mhz"};
    for (const int i : counts) {
        combined.header.push_back("rho_i" + std::to_string(i));
        combined.header.push_back("stderr_i" + std::to_string(i));
    }
    for (std::size_t d = 0; d < grid.size(); ++d) {
        std::vector<double> row{grid[d]};
        for (const int i : counts) {
            row.push_back(outputs.spectra.at(i).values[d]);
            row.push_back(outputs.spectra.at(i).stderrs[d]);
        }
        combined.rows.push_back(std::move(row));
    }
    const fs::path combined_path = config.out_dir / "combined_rho.csv";
    csv::write(combined_path, combined);
    outputs.files.push_back(combined_path);

    json meta = base_sidecar(config, "spectrum", "MHz");
    meta["parameters"]["atom_counts"] = counts;
    json names = json::array();
    for (const auto& f : outputs.files) {
        names.push_back(f.filename().string());
    }
    meta["outputs"] = names;
    write_sidecar(config.out_dir / "spectrum_meta.json", meta);
    return outputs;
}

DetectOutputs cmd_detect(const RunConfig& config) {
    validate_config(config);
    fs::create_directories(config.out_dir);

    std::vector<int> counts;
    for (int i = 2; i <= config.chain.i_max; ++i) {
        counts.push_back(i);
    }

    DetectOutputs outputs;

    bool all_present = true;
    for (const int i : counts) {
        if (!fs::exists(config.out_dir / rho_filename(i))) {
            all_present = false;
            break;
        }
    }
    if (all_present) {
        for (const int i : counts) {
            Spectrum spec = read_spectrum_csv(config.out_dir / rho_filename(i));
            if (!outputs.rho.empty() &&
                spec.detunings_mhz != outputs.rho.begin()->second.detunings_mhz) {
                throw std::runtime_error("reloaded rho_i CSVs are on mismatched detuning grids");
            }
            outputs.rho.emplace(i, std::move(spec));
        }
        outputs.reused_rho = true;
        std::cout << "reusing rho_i CSVs from " << config.out_dir.string() << "\n";
    } else {
        const std::vector<double> grid =
            detuning_grid(config.grid_min, config.grid_max, config.grid_step);
        outputs.rho = simulate_rho_set(config, counts, grid);
        for (const int i : counts) {
            const fs::path path = config.out_dir / rho_filename(i);
            csv::write(path, spectrum_table(outputs.rho.at(i)));
            outputs.files.push_back(path);
        }
    }

    ChainOutputs chain_out = run_chain(outputs.rho, config.chain);
    outputs.tail_mass = chain_out.tail_mass;

    for (auto& [n, spec] : chain_out.s_n) {
        const fs::path path = config.out_dir / sn_filename(n);
        csv::Table table;
        table.header = {"detuning_mhz", "s_n"};
        for (std::size_t d = 0; d < spec.size(); ++d) {
            table.rows.push_back({spec.detunings_mhz[d], spec.values[d]});
        }
        csv::write(path, table);
        outputs.files.push_back(path);

        double amplitude = std::numeric_limits<double>::quiet_NaN();
        double width = std::numeric_limits<double>::quiet_NaN();
        try {
            amplitude = peak_amplitude(spec);
            width = fwhm(spec);
        } catch (const std::exception& e) {
            std::cerr << "warning: line metrics unavailable for S_" << n << ": " << e.what()
                      << "\n";
        }
        outputs.amplitude[n] = amplitude;
        outputs.width_mhz[n] = width;
        std::cout << "S_" << n << ": amplitude = " << csv::format_double(amplitude)
                  << ", fwhm = " << csv::format_double(width) << " MHz, poisson tail = "
                  << csv::format_double(outputs.tail_mass.at(n)) << "\n";
        outputs.s_n.emplace(n, std::move(spec));
    }

    csv::Table amp_table;
    amp_table.header = {"n", "amplitude"};
    csv::Table width_table;
    width_table.header = {"n", "fwhm_mhz"};
    for (const auto& [n, amplitude] : outputs.amplitude) {
        amp_table.rows.push_back({static_cast<double>(n), amplitude});
        width_table.rows.push_back({static_cast<double>(n), outputs.width_mhz.at(n)});
    }
    const fs::path amp_path = config.out_dir / "amplitude_vs_n.csv";
    const fs::path width_path = config.out_dir / "fwhm_vs_n.csv";
    csv::write(amp_path, amp_table);
    csv::write(width_path, width_table);
    outputs.files.push_back(amp_path);
    outputs.files.push_back(width_path);

    for (int n = 1; n <= 5; ++n) {
        outputs.histograms.emplace(n, interaction_histogram(config.chain, n));
    }
    const fs::path hist_path = config.out_dir / "interaction_histogram.csv";
    write_histogram_csv(hist_path, outputs.histograms);
    outputs.files.push_back(hist_path);

    json meta = base_sidecar(config, "detect", "MHz");
    meta["detection"] = chain_json(config.chain);
    meta["reused_rho"] = outputs.reused_rho;
    json tails;
    for (const auto& [n, tail] : outputs.tail_mass) {
        tails[std::to_string(n)] = tail;
    }
    meta["quality"] = {{"poisson_tail_mass", tails}};
    json names = json::array();
    for (const auto& f : outputs.files) {
        names.push_back(f.filename().string());
    }
    meta["outputs"] = names;
    write_sidecar(config.out_dir / "detect_meta.json", meta);
    return outputs;
}

HistogramOutputs cmd_histogram(const RunConfig& config) {
    validate_config(config);
    fs::create_directories(config.out_dir);

    HistogramOutputs outputs;
    for (int n = 1; n <= 5; ++n) {
        outputs.histograms.emplace(n, interaction_histogram(config.chain, n));
    }
    const fs::path path = config.out_dir / "interaction_histogram.csv";
    write_histogram_csv(path, outputs.histograms);
    outputs.files.push_back(path);

    std::cout << "interacting-number weights (lambda = "
              << csv::format_double(config.chain.lambda()) << ", p32 = "
              << csv::format_double(config.chain.p32) << "):\n";
    for (const auto& [n, hist] : outputs.histograms) {
        std::cout << "  N=" << n << ": none=" << csv::format_double(hist.none_weight);
        double resonant_total = 0.0;
        for (std::size_t j = 0; j < hist.resonant_weights.size(); ++j) {
            std::cout << " k" << (j + 2) << "=" << csv::format_double(hist.resonant_weights[j]);
            resonant_total += hist.resonant_weights[j];
        }
        if (resonant_total > 0.0) {
            std::cout << " (k=2 share of resonant: " << csv::format_double(hist.k2_share())
                      << ")";
        }
        std::cout << "\n";
    }

    json meta = base_sidecar(config, "histogram", "MHz");
    meta["detection"] = chain_json(config.chain);
    meta["outputs"] = json::array({path.filename().string()});
    write_sidecar(config.out_dir / "histogram_meta.json", meta);
    return outputs;
}

FieldscanOutputs cmd_fieldscan(const RunConfig& config) {
    validate_config(config, /*grid_is_field=*/true);
    fs::create_directories(config.out_dir);

    FieldscanOutputs outputs;
    outputs.fields_vcm = detuning_grid(config.grid_min, config.grid_max, config.grid_step);
    const std::size_t n_fields = outputs.fields_vcm.size();

    // The detuning grid must ascend; a negative Stark slope reverses the
    // field order.
    const bool reversed = config.stark.slope_mhz_per_vcm < 0.0;
    std::vector<double> deltas(n_fields);
    for (std::size_t j = 0; j < n_fields; ++j) {
        const double field = outputs.fields_vcm[reversed ? n_fields - 1 - j : j];
        deltas[j] = field_to_detuning(field, config.stark);
    }
    auto delta_index = [&](std::size_t field_index) {
        return reversed ? n_fields - 1 - field_index : field_index;
    };

    std::vector<int> counts;
    for (int i = 2; i <= config.chain.i_max; ++i) {
        counts.push_back(i);
    }
    std::map<int, Spectrum> rho = simulate_rho_set(config, counts, deltas);
    ChainOutputs chain_out = run_chain(rho, config.chain);

    for (const auto& [n, spec] : chain_out.s_n) {
        std::vector<double> by_field(n_fields);
        for (std::size_t j = 0; j < n_fields; ++j) {
            by_field[j] = spec.values[delta_index(j)];
        }
        csv::Table table;
        table.header = {"field_vcm", "s_n"};
        for (std::size_t j = 0; j < n_fields; ++j) {
            table.rows.push_back({outputs.fields_vcm[j], by_field[j]});
        }
        const fs::path path = config.out_dir / ("fieldscan_" + sn_filename(n));
        csv::write(path, table);
        outputs.files.push_back(path);
        outputs.s_n.emplace(n, std::move(by_field));
    }

    const std::vector<double>& s1 = outputs.s_n.at(1);
    const std::size_t peak =
        static_cast<std::size_t>(std::distance(s1.begin(), std::max_element(s1.begin(), s1.end())));
    outputs.peak_field_vcm = outputs.fields_vcm[peak];
    Spectrum s1_field;
    s1_field.detunings_mhz = outputs.fields_vcm;  // x axis in V/cm for the width estimate
    s1_field.values = s1;
    s1_field.stderrs.assign(n_fields, 0.0);
    outputs.s1_width_vcm = fwhm(s1_field);

    std::cout << "fieldscan: S_1 peak at " << csv::format_double(outputs.peak_field_vcm)
              << " V/cm, S_1 width = " << csv::format_double(outputs.s1_width_vcm * 1e3)
              << " mV/cm\n";

    json meta = base_sidecar(config, "fieldscan", "V/cm");
    meta["detection"] = chain_json(config.chain);
    meta["stark"] = {{"resonance_field_vcm", config.stark.resonance_field_vcm},
                     {"slope_mhz_per_vcm", config.stark.slope_mhz_per_vcm},
                     {"zero_field_detuning_mhz", config.stark.zero_field_detuning_mhz}};
    json names = json::array();
    for (const auto& f : outputs.files) {
        names.push_back(f.filename().string());
    }
    meta["outputs"] = names;
    write_sidecar(config.out_dir / "fieldscan_meta.json", meta);
    return outputs;
}

CalibratedParams cmd_calibrate(double alpha, double n_bar_t) {
    const CalibratedParams params = extract_params(alpha, n_bar_t);
    std::cout << "alpha = " << csv::format_double(alpha)
              << ", n_bar*T = " << csv::format_double(n_bar_t) << "\n"
              << "n_bar = " << csv::format_double(params.n_bar)
              << ", T = " << csv::format_double(params.efficiency) << " ("
              << csv::format_double(params.efficiency * 100.0) << "%)\n";
    return params;
}

LineshapeOutputs cmd_lineshape(const fs::path& input_csv, const fs::path& out_dir) {
    const csv::Table table = csv::read(input_csv);
    const bool rho_layout =
        table.header == std::vector<std::string>{"detuning_mhz", "rho", "stderr"};
    const bool sn_layout = table.header == std::vector<std::string>{"detuning_mhz", "s_n"};
    if (!rho_layout && !sn_layout) {
        throw std::runtime_error(input_csv.string() +
                                 ": expected header detuning_mhz,rho,stderr or detuning_mhz,s_n");
    }

    Spectrum spec;
    for (const auto& row : table.rows) {
        spec.detunings_mhz.push_back(row.at(0));
        spec.values.push_back(row.at(1));
        spec.stderrs.push_back(rho_layout ? row.at(2) : 0.0);
    }

    LineshapeOutputs outputs;
    outputs.fwhm_mhz = fwhm(spec);
    outputs.amplitude = peak_amplitude(spec);
    outputs.fit = lorentz_fit(spec);
    outputs.wing_mean = wing_residual_mean(spec, outputs.fit);

    fs::create_directories(out_dir);
    outputs.fit_file = out_dir / (input_csv.stem().string() + "_lorentz_fit.csv");
    csv::Table fit_table;
    fit_table.header = {"detuning_mhz", "data", "fit", "residual"};
    for (std::size_t d = 0; d < spec.size(); ++d) {
        fit_table.rows.push_back({spec.detunings_mhz[d], spec.values[d],
                                  spec.values[d] - outputs.fit.residuals[d],
                                  outputs.fit.residuals[d]});
    }
    csv::write(outputs.fit_file, fit_table);

    std::cout << input_csv.filename().string() << ": fwhm = " << csv::format_double(outputs.fwhm_mhz)
              << " MHz, amplitude = " << csv::format_double(outputs.amplitude)
              << "\nlorentz fit: A = " << csv::format_double(outputs.fit.amplitude)
              << ", gamma = " << csv::format_double(outputs.fit.gamma)
              << " MHz, center = " << csv::format_double(outputs.fit.center)
              << " MHz, offset = " << csv::format_double(outputs.fit.offset)
              << "\nmean wing residual (|delta - c| > 3 gamma) = "
              << csv::format_double(outputs.wing_mean) << "\n";
    return outputs;
}

SpectrumOutputs cmd_reproduce_fig2(RunConfig config) {
    config.atom_counts = {2, 3, 4, 5};
    SpectrumOutputs outputs = cmd_spectrum(config);

    const Spectrum& rho2 = outputs.spectra.at(2);
    std::cout << "FWHM(rho_2) = " << csv::format_double(fwhm(rho2)) << " MHz (1/t0 = "
              << csv::format_double(1.0 / config.t0_us) << " MHz)\n";
    for (const auto& [i, spec] : outputs.spectra) {
        std::cout << "rho_" << i
                  << ": peak amplitude = " << csv::format_double(peak_amplitude(spec))
                  << ", fwhm = " << csv::format_double(fwhm(spec)) << " MHz\n";
    }
    const LorentzFit fit = lorentz_fit(rho2);
    std::cout << "rho_2 Lorentz fit: gamma = " << csv::format_double(fit.gamma)
              << " MHz, mean wing residual = "
              << csv::format_double(wing_residual_mean(rho2, fit)) << "\n";
    return outputs;
}

DetectOutputs cmd_reproduce_fig3(RunConfig config) {
    DetectOutputs outputs = cmd_detect(config);
    for (const auto& [n, hist] : outputs.histograms) {
        double resonant_total = 0.0;
        for (const double w : hist.resonant_weights) resonant_total += w;
        if (resonant_total > 0.0) {
            std::cout << "histogram N=" << n << ": k=2 share of resonant weight = "
                      << csv::format_double(hist.k2_share()) << "\n";
        }
    }
    return outputs;
}

}  // namespace foerster
