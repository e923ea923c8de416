#pragma once

#include <vector>

#include "foerster/montecarlo.hpp"

namespace foerster {

/// Parameters of the detection chain mapping ideal rho_i spectra to the
/// post-selected signals S_N.
struct DetectionChain {
    double n_bar = 1.05;       // mean Rydberg atoms excited per laser pulse
    double efficiency = 0.65;  // SFI detection efficiency T, in (0, 1]
    double rho_bg = 0.01;      // nonresonant background, detuning-independent
    double p32 = 0.52;         // probability of 37P3/2 (interacting) excitation
    int i_max = 5;             // truncation order of the multiplicity mixing

    double lambda() const { return n_bar * (1.0 - efficiency); }
    double p12() const { return 1.0 - p32; }
};

/// Throws std::invalid_argument naming every violated field.
void validate_chain(const DetectionChain& chain);

struct FineStructureMix {
    Spectrum spectrum;
    double truncation_mass = 0.0;  // binomial weight of dropped k > i_max terms
};

/// Binomial convolution over the interacting-atom number: with i atoms
/// excited, rho_i -> sum_{k=2..i} rho_k C(i,k) p32^k (1-p32)^(i-k).
/// rho[j] must hold the spectrum for k = j + 2, all on one detuning grid.
FineStructureMix fine_structure_mix(const std::vector<Spectrum>& rho, int atom_count, double p32);

struct DetectionMix {
    Spectrum spectrum;
    double poisson_tail_mass = 0.0;  // e^-lambda sum_{j > i_max - N} lambda^j / j!
    bool tail_warning = false;       // tail mass above 1e-3: i_max too small for N
};

/// Poisson mixture of the fine-structure-mixed spectra:
/// S_N = rho_bg + e^-lambda sum_{i=N..i_max} rho~_i lambda^(i-N) / (i-N)!
/// with lambda = n_bar (1 - T). rho_tilde[j] must hold the spectrum for
/// i = j + 2; terms with i < 2 contribute nothing (a single atom cannot
/// interact). The dropped Poisson mass past i_max is attached as a quality
/// metric rather than silently ignored.
DetectionMix detection_mix(const std::vector<Spectrum>& rho_tilde, const DetectionChain& chain,
                           int detected_count);

/// Probability distribution of the number k of actually interacting atoms
/// behind a signal with N detected atoms. "none" aggregates every event with
/// no resonant pair (fewer than two atoms excited or fewer than two of them
/// in the interacting state).
struct InteractionHistogram {
    double none_weight = 0.0;
    std::vector<double> resonant_weights;  // k = 2 .. i_max
    double poisson_tail_mass = 0.0;

    /// k = 2 fraction of the total resonant (k >= 2) weight.
    double k2_share() const;
};

InteractionHistogram interaction_histogram(const DetectionChain& chain, int detected_count);

struct CalibratedParams {
    double n_bar = 0.0;
    double efficiency = 0.0;
};

/// Calibration arithmetic from the measured one- to two-atom amplitude ratio
/// alpha = (S1 - rho)/(S2 - rho) and the mean detected count n_bar T:
/// n_bar = alpha/(1 - alpha) + n_bar T, then T = n_bar T / n_bar.
CalibratedParams extract_params(double alpha, double n_bar_t);

}  // namespace foerster
