#pragma once

#include <cstdint>
#include <vector>

#include "foerster/interaction.hpp"

namespace foerster {

struct SpectrumRequest {
    int atom_count = 2;
    std::vector<double> detunings_mhz;  // finite, strictly ascending
    double t0_us = 0.515;
    double cube_side_um = 18.0;
    int n_realizations = 500;
    CouplingConstants constants{};
    std::uint64_t seed = 0;
};

/// One spectrum: transfer fraction (or observed signal) per detuning, with
/// the Monte-Carlo standard error per point and the request that produced
/// it. For derived spectra (mixes, synthetic test inputs) meta keeps
/// whatever the producer filled in.
struct Spectrum {
    std::vector<double> detunings_mhz;
    std::vector<double> values;
    std::vector<double> stderrs;
    SpectrumRequest meta{};

    std::size_t size() const { return detunings_mhz.size(); }
};

/// Uniform grid min, min + step, ..., covering max.
std::vector<double> detuning_grid(double min_mhz, double max_mhz, double step_mhz);

/// Realization-averaged spectrum rho_i: one geometry per realization shared
/// across the whole detuning grid, all-P initial state propagated for t0.
/// Realizations run concurrently when workers > 1 (or <= 0 for the hardware
/// thread count), but the reduction is in ascending realization order, so
/// the output is bit-identical for any worker count.
Spectrum simulate_spectrum(const SpectrumRequest& request, int workers = 1);

}  // namespace foerster
