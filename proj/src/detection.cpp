#include "foerster/detection.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace foerster {

namespace {

double binomial_coefficient(int n, int k) {
    double c = 1.0;
    for (int j = 1; j <= k; ++j) {
        c *= static_cast<double>(n - k + j) / static_cast<double>(j);
    }
    return c;
}

double binomial_pmf(int k, int n, double p) {
    return binomial_coefficient(n, k) * std::pow(p, k) * std::pow(1.0 - p, n - k);
}

double poisson_pmf(int j, double lambda) {
    double w = std::exp(-lambda);
    for (int step = 1; step <= j; ++step) {
        w *= lambda / static_cast<double>(step);
    }
    return w;
}

void check_shared_grid(const std::vector<Spectrum>& spectra, const char* what) {
    for (std::size_t j = 1; j < spectra.size(); ++j) {
        if (spectra[j].detunings_mhz != spectra[0].detunings_mhz) {
            throw std::invalid_argument(std::string(what) + ": input spectrum " +
                                        std::to_string(j) +
                                        " is on a different detuning grid than the first");
        }
    }
    for (std::size_t j = 0; j < spectra.size(); ++j) {
        if (spectra[j].values.size() != spectra[j].detunings_mhz.size() ||
            spectra[j].stderrs.size() != spectra[j].detunings_mhz.size()) {
            throw std::invalid_argument(std::string(what) + ": input spectrum " +
                                        std::to_string(j) + " has inconsistent column lengths");
        }
    }
}

}  // namespace

void validate_chain(const DetectionChain& chain) {
    std::string problems;
    if (chain.n_bar < 0.0) {
        problems += "\n  - n_bar must be >= 0, got " + std::to_string(chain.n_bar);
    }
    if (!(chain.efficiency > 0.0) || chain.efficiency > 1.0) {
        problems += "\n  - efficiency T must be in (0, 1], got " + std::to_string(chain.efficiency);
    }
    if (chain.rho_bg < 0.0) {
        problems += "\n  - rho_bg must be >= 0, got " + std::to_string(chain.rho_bg);
    }
    if (chain.p32 < 0.0 || chain.p32 > 1.0) {
        problems += "\n  - p32 must be in [0, 1], got " + std::to_string(chain.p32);
    }
    if (chain.i_max < 2) {
        problems += "\n  - i_max must be >= 2, got " + std::to_string(chain.i_max);
    }
    if (!problems.empty()) {
        throw std::invalid_argument("invalid detection chain:" + problems);
    }
}

FineStructureMix fine_structure_mix(const std::vector<Spectrum>& rho, int atom_count, double p32) {
    if (atom_count < 2) {
        throw std::invalid_argument("fine_structure_mix needs atom_count >= 2, got " +
                                    std::to_string(atom_count));
    }
    if (rho.empty()) {
        throw std::invalid_argument("fine_structure_mix: no input spectra (need k = 2..i_max)");
    }
    if (p32 < 0.0 || p32 > 1.0) {
        throw std::invalid_argument("p32 must be in [0, 1], got " + std::to_string(p32));
    }
    check_shared_grid(rho, "fine_structure_mix");

    const int i_max = 2 + static_cast<int>(rho.size()) - 1;
    const std::size_t n = rho[0].size();

    FineStructureMix mix;
    mix.spectrum.detunings_mhz = rho[0].detunings_mhz;
    mix.spectrum.values.assign(n, 0.0);
    mix.spectrum.stderrs.assign(n, 0.0);
    mix.spectrum.meta.atom_count = atom_count;
    mix.spectrum.meta.detunings_mhz = rho[0].detunings_mhz;

    std::vector<double> variance(n, 0.0);
    for (int k = 2; k <= atom_count; ++k) {
        const double weight = binomial_pmf(k, atom_count, p32);
        if (k > i_max) {
            mix.truncation_mass += weight;
            continue;
        }
        const Spectrum& in = rho[static_cast<std::size_t>(k - 2)];
        for (std::size_t d = 0; d < n; ++d) {
            mix.spectrum.values[d] += weight * in.values[d];
            variance[d] += weight * weight * in.stderrs[d] * in.stderrs[d];
        }
    }
    for (std::size_t d = 0; d < n; ++d) {
        mix.spectrum.stderrs[d] = std::sqrt(variance[d]);
    }
    return mix;
}

DetectionMix detection_mix(const std::vector<Spectrum>& rho_tilde, const DetectionChain& chain,
                           int detected_count) {
    validate_chain(chain);
    if (detected_count < 1) {
        throw std::invalid_argument("detected count N must be >= 1, got " +
                                    std::to_string(detected_count));
    }
    if (static_cast<int>(rho_tilde.size()) != chain.i_max - 1) {
        throw std::invalid_argument("detection_mix expects spectra for i = 2.." +
                                    std::to_string(chain.i_max) + ", got " +
                                    std::to_string(rho_tilde.size()) + " inputs");
    }
    check_shared_grid(rho_tilde, "detection_mix");

    const double lambda = chain.lambda();
    const std::size_t n = rho_tilde[0].size();

    DetectionMix mix;
    mix.spectrum.detunings_mhz = rho_tilde[0].detunings_mhz;
    mix.spectrum.values.assign(n, chain.rho_bg);
    mix.spectrum.stderrs.assign(n, 0.0);
    mix.spectrum.meta.detunings_mhz = rho_tilde[0].detunings_mhz;

    std::vector<double> variance(n, 0.0);
    double included_mass = 0.0;
    for (int i = detected_count; i <= chain.i_max; ++i) {
        const double weight = poisson_pmf(i - detected_count, lambda);
        included_mass += weight;
        if (i < 2) {
            continue;  // a single excited atom has no resonant partner
        }
        const Spectrum& in = rho_tilde[static_cast<std::size_t>(i - 2)];
        for (std::size_t d = 0; d < n; ++d) {
            mix.spectrum.values[d] += weight * in.values[d];
            variance[d] += weight * weight * in.stderrs[d] * in.stderrs[d];
        }
    }
    for (std::size_t d = 0; d < n; ++d) {
        mix.spectrum.stderrs[d] = std::sqrt(variance[d]);
    }
    mix.poisson_tail_mass = std::max(0.0, 1.0 - included_mass);
    mix.tail_warning = mix.poisson_tail_mass > 1e-3;
    return mix;
}

double InteractionHistogram::k2_share() const {
    double total = 0.0;
    for (const double w : resonant_weights) {
        total += w;
    }
    if (total <= 0.0) {
        throw std::runtime_error("histogram carries no resonant weight");
    }
    return resonant_weights.front() / total;
}

InteractionHistogram interaction_histogram(const DetectionChain& chain, int detected_count) {
    validate_chain(chain);
    if (detected_count < 1) {
        throw std::invalid_argument("detected count N must be >= 1, got " +
                                    std::to_string(detected_count));
    }

    const double lambda = chain.lambda();
    InteractionHistogram hist;
    hist.resonant_weights.assign(static_cast<std::size_t>(chain.i_max - 1), 0.0);

    double included_mass = 0.0;
    for (int i = detected_count; i <= chain.i_max; ++i) {
        const double pw = poisson_pmf(i - detected_count, lambda);
        included_mass += pw;
        for (int k = 0; k <= i; ++k) {
            const double w = pw * binomial_pmf(k, i, chain.p32);
            if (k >= 2) {
                hist.resonant_weights[static_cast<std::size_t>(k - 2)] += w;
            } else {
                hist.none_weight += w;
            }
        }
    }
    hist.poisson_tail_mass = std::max(0.0, 1.0 - included_mass);
    return hist;
}

CalibratedParams extract_params(double alpha, double n_bar_t) {
    if (!(alpha > 0.0) || alpha >= 1.0) {
        throw std::invalid_argument(
            "amplitude ratio alpha must be in (0, 1), got " + std::to_string(alpha) +
            " (S1 amplitude cannot reach or exceed S2's in this model)");
    }
    if (!(n_bar_t > 0.0)) {
        throw std::invalid_argument("mean detected count n_bar*T must be positive, got " +
                                    std::to_string(n_bar_t));
    }
    CalibratedParams params;
    params.n_bar = alpha / (1.0 - alpha) + n_bar_t;
    params.efficiency = n_bar_t / params.n_bar;
    if (!(params.efficiency > 0.0) || params.efficiency > 1.0) {
        throw std::invalid_argument("inconsistent inputs: derived efficiency T = " +
                                    std::to_string(params.efficiency) + " is outside (0, 1]");
    }
    return params;
}

}  // namespace foerster
