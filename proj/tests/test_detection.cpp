#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "foerster/detection.hpp"

using namespace foerster;

namespace {

Spectrum synthetic(const std::vector<double>& grid, const std::vector<double>& values,
                   double stderr_level = 0.0) {
    Spectrum spec;
    spec.detunings_mhz = grid;
    spec.values = values;
    spec.stderrs.assign(values.size(), stderr_level);
    return spec;
}

/// Spectra for k = 2..i_max whose resonance amplitude grows with k, the
/// saturation pattern of the ideal multi-atom spectra.
std::vector<Spectrum> saturating_inputs(int i_max) {
    const std::vector<double> grid{-2.0, -1.0, 0.0, 1.0, 2.0};
    const double peaks[] = {0.16, 0.19, 0.21, 0.22, 0.23, 0.235, 0.24};
    std::vector<Spectrum> rho;
    for (int k = 2; k <= i_max; ++k) {
        const double peak = peaks[k - 2];
        rho.push_back(synthetic(grid, {0.1 * peak, 0.5 * peak, peak, 0.5 * peak, 0.1 * peak},
                                0.002));
    }
    return rho;
}

// Oracle-side Poisson and binomial terms built from Pascal recursion and a
// running product, structured differently from the library's direct pmfs.
double oracle_pois(int j, double lambda) {
    double value = std::exp(-lambda);
    for (int step = 1; step <= j; ++step) value = value * lambda / step;
    return value;
}

double oracle_binom(int k, int n, double p) {
    std::vector<std::vector<double>> pascal(n + 1, std::vector<double>(n + 1, 0.0));
    for (int row = 0; row <= n; ++row) {
        pascal[row][0] = 1.0;
        for (int col = 1; col <= row; ++col) {
            pascal[row][col] = pascal[row - 1][col - 1] + (col <= row - 1 ? pascal[row - 1][col] : 0.0);
        }
    }
    double value = pascal[n][k];
    for (int step = 0; step < k; ++step) value *= p;
    for (int step = 0; step < n - k; ++step) value *= 1.0 - p;
    return value;
}

}  // namespace

TEST_CASE("fine-structure mix: identity, single-term and zero limits") {
    const std::vector<double> grid{-1.0, 0.0, 1.0};
    const std::vector<Spectrum> rho{synthetic(grid, {0.05, 0.2, 0.05}, 0.01),
                                    synthetic(grid, {0.07, 0.22, 0.07}, 0.01)};

    const FineStructureMix identity = fine_structure_mix(rho, 2, 1.0);
    for (std::size_t d = 0; d < grid.size(); ++d) {
        CHECK(identity.spectrum.values[d] == doctest::Approx(rho[0].values[d]).epsilon(1e-14));
    }
    CHECK(identity.truncation_mass == 0.0);

    const FineStructureMix single = fine_structure_mix(rho, 2, 0.52);
    for (std::size_t d = 0; d < grid.size(); ++d) {
        CHECK(single.spectrum.values[d] ==
              doctest::Approx(0.2704 * rho[0].values[d]).epsilon(1e-12));
    }

    const FineStructureMix zero = fine_structure_mix(rho, 3, 0.0);
    for (const double v : zero.spectrum.values) {
        CHECK(v == 0.0);
    }
}

TEST_CASE("fine-structure mix reports dropped binomial mass past i_max") {
    // Only k = 2..3 available for i = 5: k = 4, 5 terms are truncated.
    const std::vector<double> grid{-1.0, 0.0, 1.0};
    const std::vector<Spectrum> rho{synthetic(grid, {0.0, 0.2, 0.0}),
                                    synthetic(grid, {0.0, 0.22, 0.0})};
    const FineStructureMix mix = fine_structure_mix(rho, 5, 0.52);
    const double expected =
        oracle_binom(4, 5, 0.52) + oracle_binom(5, 5, 0.52);
    CHECK(mix.truncation_mass == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("fine-structure mix rejects mismatched grids") {
    const std::vector<Spectrum> rho{synthetic({-1.0, 0.0, 1.0}, {0.0, 0.2, 0.0}),
                                    synthetic({-2.0, 0.0, 2.0}, {0.0, 0.2, 0.0})};
    CHECK_THROWS_AS(fine_structure_mix(rho, 3, 0.52), std::invalid_argument);
    CHECK_THROWS_AS(fine_structure_mix({}, 3, 0.52), std::invalid_argument);
    const std::vector<Spectrum> ok{synthetic({-1.0, 0.0, 1.0}, {0.0, 0.2, 0.0})};
    CHECK_THROWS_AS(fine_structure_mix(ok, 1, 0.52), std::invalid_argument);
}

TEST_CASE("perfect detector: S_N is the background plus rho~_N") {
    DetectionChain chain;
    chain.efficiency = 1.0;
    chain.i_max = 5;
    chain.rho_bg = 0.01;
    const std::vector<Spectrum> rho_tilde = saturating_inputs(5);
    for (int n = 2; n <= 5; ++n) {
        const DetectionMix mix = detection_mix(rho_tilde, chain, n);
        for (std::size_t d = 0; d < mix.spectrum.size(); ++d) {
            CHECK(mix.spectrum.values[d] ==
                  doctest::Approx(0.01 + rho_tilde[n - 2].values[d]).epsilon(1e-14));
        }
        CHECK(mix.poisson_tail_mass == doctest::Approx(0.0));
        CHECK_FALSE(mix.tail_warning);
    }
}

TEST_CASE("Poisson weights match the direct formula and the quoted values") {
    DetectionChain chain;  // n_bar = 1.05, T = 0.65 -> lambda = 0.3675
    const double lambda = chain.lambda();
    CHECK(lambda == doctest::Approx(0.3675).epsilon(1e-14));

    // S_1 weights for i = 1..4.
    const double quoted[] = {0.6924, 0.2545, 0.0468, 0.0057};
    for (int i = 1; i <= 4; ++i) {
        CHECK(std::abs(oracle_pois(i - 1, lambda) - quoted[i - 1]) < 1e-4);
    }

    // The mixing applies those weights to the i >= 2 inputs.
    std::vector<Spectrum> rho_tilde;
    const std::vector<double> grid{0.0};
    for (int i = 2; i <= 5; ++i) {
        std::vector<double> one(1, 0.0);
        rho_tilde.push_back(synthetic(grid, one));
    }
    for (int probe = 2; probe <= 5; ++probe) {
        rho_tilde[probe - 2].values[0] = 1.0;
        const DetectionMix mix = detection_mix(rho_tilde, chain, 1);
        CHECK(mix.spectrum.values[0] - chain.rho_bg ==
              doctest::Approx(oracle_pois(probe - 1, lambda)).epsilon(1e-12));
        rho_tilde[probe - 2].values[0] = 0.0;
    }
}

TEST_CASE("all-zero inputs leave only the background floor") {
    DetectionChain chain;
    const std::vector<double> grid{-1.0, 0.0, 1.0};
    std::vector<Spectrum> zeros;
    for (int i = 2; i <= chain.i_max; ++i) {
        zeros.push_back(synthetic(grid, {0.0, 0.0, 0.0}));
    }
    const DetectionMix mix = detection_mix(zeros, chain, 1);
    for (const double v : mix.spectrum.values) {
        CHECK(v == doctest::Approx(chain.rho_bg));
    }
}

TEST_CASE("detection mix is linear in the inputs") {
    DetectionChain chain;
    const std::vector<Spectrum> base = saturating_inputs(chain.i_max);
    std::vector<Spectrum> scaled = base;
    const double c = 1.7;
    for (auto& spec : scaled) {
        for (auto& v : spec.values) v *= c;
    }
    for (int n = 1; n <= 3; ++n) {
        const DetectionMix a = detection_mix(base, chain, n);
        const DetectionMix b = detection_mix(scaled, chain, n);
        for (std::size_t d = 0; d < a.spectrum.size(); ++d) {
            CHECK(b.spectrum.values[d] - chain.rho_bg ==
                  doctest::Approx(c * (a.spectrum.values[d] - chain.rho_bg)).epsilon(1e-12));
        }
    }
}

TEST_CASE("Poisson tail mass is tracked and warned about") {
    DetectionChain chain;  // lambda = 0.3675, i_max = 5
    const std::vector<Spectrum> rho_tilde = saturating_inputs(chain.i_max);

    const DetectionMix s1 = detection_mix(rho_tilde, chain, 1);
    const DetectionMix s2 = detection_mix(rho_tilde, chain, 2);
    CHECK(s1.poisson_tail_mass < 1e-3);
    CHECK(s2.poisson_tail_mass < 1e-3);
    CHECK_FALSE(s1.tail_warning);
    CHECK_FALSE(s2.tail_warning);

    const DetectionMix s5 = detection_mix(rho_tilde, chain, 5);
    CHECK(s5.poisson_tail_mass ==
          doctest::Approx(1.0 - std::exp(-chain.lambda())).epsilon(1e-12));
    CHECK(s5.tail_warning);

    double exact_tail_s1 = 1.0;
    for (int j = 0; j <= 4; ++j) exact_tail_s1 -= oracle_pois(j, chain.lambda());
    CHECK(s1.poisson_tail_mass == doctest::Approx(exact_tail_s1).epsilon(1e-9));
}

TEST_CASE("raising p32 raises the mixed resonance value") {
    const std::vector<Spectrum> rho = saturating_inputs(5);
    double previous = -1.0;
    for (const double p32 : {0.2, 0.4, 0.6, 0.8, 1.0}) {
        const FineStructureMix mix = fine_structure_mix(rho, 5, p32);
        const double at_resonance = mix.spectrum.values[2];
        CHECK(at_resonance > previous);
        previous = at_resonance;
    }
}

TEST_CASE("interaction histogram: degenerate and analytic cases") {
    DetectionChain perfect;
    perfect.efficiency = 1.0;
    perfect.p32 = 1.0;
    const InteractionHistogram all_three = interaction_histogram(perfect, 3);
    CHECK(all_three.none_weight == doctest::Approx(0.0));
    CHECK(all_three.resonant_weights[1] == doctest::Approx(1.0));  // k = 3
    CHECK(all_three.resonant_weights[0] == doctest::Approx(0.0));
    CHECK(all_three.resonant_weights[2] == doctest::Approx(0.0));

    DetectionChain half;
    half.efficiency = 1.0;  // lambda = 0
    half.p32 = 0.5;
    const InteractionHistogram pair = interaction_histogram(half, 2);
    CHECK(pair.resonant_weights[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(pair.none_weight == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("interaction histogram matches the brute-force double sum") {
    DetectionChain chain;  // bundled defaults
    for (int n = 1; n <= 5; ++n) {
        const InteractionHistogram hist = interaction_histogram(chain, n);

        double oracle_none = 0.0;
        std::vector<double> oracle_weights(static_cast<std::size_t>(chain.i_max - 1), 0.0);
        double mass = 0.0;
        for (int i = n; i <= chain.i_max; ++i) {
            const double pw = oracle_pois(i - n, chain.lambda());
            mass += pw;
            for (int k = 0; k <= i; ++k) {
                const double w = pw * oracle_binom(k, i, chain.p32);
                if (k >= 2) {
                    oracle_weights[static_cast<std::size_t>(k - 2)] += w;
                } else {
                    oracle_none += w;
                }
            }
        }
        CHECK(std::abs(hist.none_weight - oracle_none) < 1e-9);
        for (std::size_t j = 0; j < oracle_weights.size(); ++j) {
            CHECK(std::abs(hist.resonant_weights[j] - oracle_weights[j]) < 1e-9);
        }
        CHECK(std::abs(hist.poisson_tail_mass - (1.0 - mass)) < 1e-9);

        double total = hist.none_weight + hist.poisson_tail_mass;
        for (const double w : hist.resonant_weights) total += w;
        CHECK(std::abs(total - 1.0) < 1e-9);
    }
}

TEST_CASE("k=2 dominates the resonant weight for one detected atom") {
    DetectionChain chain;
    const InteractionHistogram hist = interaction_histogram(chain, 1);
    CHECK(hist.k2_share() >= 0.85);
    // i = 2 and i = 3 contributions quoted for the k = 2 weight.
    CHECK(oracle_pois(1, chain.lambda()) * oracle_binom(2, 2, 0.52) ==
          doctest::Approx(0.069).epsilon(0.01));
    CHECK(oracle_pois(2, chain.lambda()) * oracle_binom(2, 3, 0.52) ==
          doctest::Approx(0.018).epsilon(0.02));
}

TEST_CASE("calibration arithmetic and its error surface") {
    const CalibratedParams measured = extract_params(0.27, 0.65);
    CHECK(measured.n_bar == doctest::Approx(0.27 / 0.73 + 0.65).epsilon(1e-12));
    CHECK(std::abs(measured.n_bar - 1.0199) < 1e-4);
    CHECK(std::abs(measured.efficiency - 0.637) < 1e-3);

    const CalibratedParams even = extract_params(0.5, 0.5);
    CHECK(even.n_bar == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(even.efficiency == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    const CalibratedParams tiny = extract_params(1e-9, 0.65);
    CHECK(tiny.n_bar == doctest::Approx(0.65).epsilon(1e-6));
    CHECK(tiny.efficiency == doctest::Approx(1.0).epsilon(1e-6));

    CHECK_THROWS_AS(extract_params(1.0, 0.65), std::invalid_argument);
    CHECK_THROWS_AS(extract_params(1.3, 0.65), std::invalid_argument);
    CHECK_THROWS_AS(extract_params(0.0, 0.65), std::invalid_argument);
    CHECK_THROWS_AS(extract_params(-0.2, 0.65), std::invalid_argument);
    CHECK_THROWS_AS(extract_params(0.27, 0.0), std::invalid_argument);
}

TEST_CASE("detection chain validation names the violated fields") {
    DetectionChain chain;
    chain.efficiency = 0.0;
    chain.p32 = 1.2;
    chain.i_max = 1;
    try {
        validate_chain(chain);
        FAIL("expected validation to throw");
    } catch (const std::invalid_argument& e) {
        const std::string what = e.what();
        CHECK(what.find("efficiency") != std::string::npos);
        CHECK(what.find("p32") != std::string::npos);
        CHECK(what.find("i_max") != std::string::npos);
    }
}

TEST_CASE("detection mix input-shape errors") {
    DetectionChain chain;
    const std::vector<Spectrum> short_list = saturating_inputs(4);  // i = 2..4 only
    CHECK_THROWS_AS(detection_mix(short_list, chain, 1), std::invalid_argument);
    const std::vector<Spectrum> full = saturating_inputs(5);
    CHECK_THROWS_AS(detection_mix(full, chain, 0), std::invalid_argument);
}
