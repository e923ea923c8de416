#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "foerster/detection.hpp"
#include "foerster/lineshape.hpp"
#include "foerster/montecarlo.hpp"

namespace foerster {

inline constexpr const char* kArtifactVersion = "1.0.0";

/// Everything a run needs, validated up front so a run that starts never
/// aborts for precondition reasons. grid_* is a detuning grid in MHz for
/// spectrum/detect and a field grid in V/cm for fieldscan.
struct RunConfig {
    std::vector<int> atom_counts{2};
    double t0_us = 0.515;
    double cube_side_um = 18.0;
    int realizations = 500;
    std::uint64_t seed = 42;
    CouplingConstants constants{};
    double grid_min = -15.0;
    double grid_max = 15.0;
    double grid_step = 0.25;
    DetectionChain chain{};
    StarkMap stark{};
    int workers = 0;  // <= 0 selects the hardware thread count
    std::filesystem::path out_dir = "out";
};

/// Field-grid defaults for the fieldscan subcommand (1.74..1.84 V/cm).
RunConfig fieldscan_defaults();

/// Validates every field against the module preconditions; throws
/// std::invalid_argument listing all violations with their field names.
void validate_config(const RunConfig& config, bool grid_is_field = false);

struct SpectrumOutputs {
    std::map<int, Spectrum> spectra;  // by atom count
    std::vector<std::filesystem::path> files;
};

/// Writes rho_i<i>.csv per requested atom count plus a combined plot file
/// and a metadata sidecar.
SpectrumOutputs cmd_spectrum(const RunConfig& config);

struct DetectOutputs {
    std::map<int, Spectrum> rho;       // ideal spectra, i = 2..i_max
    std::map<int, Spectrum> s_n;       // post-selected signals by N
    std::map<int, double> amplitude;   // baseline-subtracted peak per N
    std::map<int, double> width_mhz;   // FWHM per N
    std::map<int, double> tail_mass;   // Poisson truncation mass per N
    std::map<int, InteractionHistogram> histograms;
    bool reused_rho = false;
    std::vector<std::filesystem::path> files;
};

/// Transforms rho_i (reloaded from out_dir when all files are present,
/// simulated otherwise) into S_N CSVs, amplitude/width summary tables and
/// the interacting-number histogram table.
DetectOutputs cmd_detect(const RunConfig& config);

struct HistogramOutputs {
    std::map<int, InteractionHistogram> histograms;  // by detected count N
    std::vector<std::filesystem::path> files;
};

HistogramOutputs cmd_histogram(const RunConfig& config);

struct FieldscanOutputs {
    std::vector<double> fields_vcm;
    std::map<int, std::vector<double>> s_n;  // by N, in field order
    double peak_field_vcm = 0.0;             // argmax of S1
    double s1_width_vcm = 0.0;               // FWHM of S1 in the field scale
    std::vector<std::filesystem::path> files;
};

/// Composes the Stark map with the detection pipeline and emits S_N against
/// the electric field.
FieldscanOutputs cmd_fieldscan(const RunConfig& config);

/// Thin wrapper over extract_params with a stdout report.
CalibratedParams cmd_calibrate(double alpha, double n_bar_t);

struct LineshapeOutputs {
    double fwhm_mhz = 0.0;
    double amplitude = 0.0;
    LorentzFit fit;
    double wing_mean = 0.0;
    std::filesystem::path fit_file;
};

/// Reads a spectrum CSV (detuning_mhz,rho[,stderr] or detuning_mhz,s_n),
/// reports width/amplitude/Lorentz metrics and writes the fitted curve.
LineshapeOutputs cmd_lineshape(const std::filesystem::path& input_csv,
                               const std::filesystem::path& out_dir);

/// Bundled-default runs: fig2 simulates rho_2..rho_5, fig3 chains the
/// detection transform on top (reusing fig2 CSVs when present).
SpectrumOutputs cmd_reproduce_fig2(RunConfig config);
DetectOutputs cmd_reproduce_fig3(RunConfig config);

}  // namespace foerster
