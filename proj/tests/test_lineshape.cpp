#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "foerster/lineshape.hpp"

using namespace foerster;

namespace {

Spectrum from_function(double x_min, double x_max, double step, double (*f)(double)) {
    Spectrum spec;
    for (double x = x_min; x <= x_max + 1e-12; x += step) {
        spec.detunings_mhz.push_back(x);
        spec.values.push_back(f(x));
        spec.stderrs.push_back(0.0);
    }
    return spec;
}

Spectrum lorentzian(double amplitude, double gamma, double center, double offset, double x_min,
                    double x_max, double step) {
    Spectrum spec;
    for (double x = x_min; x <= x_max + 1e-12; x += step) {
        spec.detunings_mhz.push_back(x);
        spec.values.push_back(amplitude * gamma * gamma /
                                  (gamma * gamma + (x - center) * (x - center)) +
                              offset);
        spec.stderrs.push_back(0.0);
    }
    return spec;
}

}  // namespace

TEST_CASE("fwhm of a synthetic Lorentzian is 2 gamma within 0.5%") {
    const double gamma = 0.97;
    const Spectrum spec = lorentzian(0.2, gamma, 0.0, 0.0, -50.0, 50.0, 0.05);
    CHECK(std::abs(fwhm(spec) - 2.0 * gamma) / (2.0 * gamma) < 0.005);
}

TEST_CASE("fwhm of a triangle of base 2w is w") {
    const Spectrum spec = from_function(-10.0, 10.0, 0.1, [](double x) {
        return std::max(0.0, 1.0 - std::abs(x) / 4.0);  // w = 4
    });
    CHECK(fwhm(spec) == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("baseline shifts cancel and positive scaling acts only on amplitude") {
    const Spectrum spec = lorentzian(0.2, 1.0, 0.3, 0.0, -30.0, 30.0, 0.1);
    Spectrum shifted = spec;
    for (auto& v : shifted.values) v += 0.37;
    Spectrum scaled = spec;
    for (auto& v : scaled.values) v *= 2.5;

    CHECK(fwhm(shifted) == doctest::Approx(fwhm(spec)).epsilon(1e-9));
    CHECK(peak_amplitude(shifted) == doctest::Approx(peak_amplitude(spec)).epsilon(1e-9));
    CHECK(fwhm(scaled) == doctest::Approx(fwhm(spec)).epsilon(1e-9));
    CHECK(peak_amplitude(scaled) == doctest::Approx(2.5 * peak_amplitude(spec)).epsilon(1e-9));
}

TEST_CASE("flat and monotone spectra have no measurable line") {
    const Spectrum flat = from_function(-5.0, 5.0, 0.1, [](double) { return 0.2; });
    CHECK(peak_amplitude(flat) == doctest::Approx(0.0));
    CHECK_THROWS_AS(fwhm(flat), std::runtime_error);

    const Spectrum ramp = from_function(-5.0, 5.0, 0.1, [](double x) { return x; });
    CHECK_THROWS_AS(fwhm(ramp), std::runtime_error);  // no right-side crossing
}

TEST_CASE("lorentz_fit recovers exact parameters from its own model") {
    // Wide grid: the Lorentz tail under the outer-10% baseline estimate is
    // ~3e-8, so the pinned offset matches the true one to that level.
    const Spectrum spec = lorentzian(0.21, 0.93, 0.4, 0.013, -3000.0, 3000.0, 0.5);
    const LorentzFit fit = lorentz_fit(spec);
    CHECK(std::abs(fit.amplitude - 0.21) / 0.21 < 1e-6);
    CHECK(std::abs(fit.gamma - 0.93) / 0.93 < 1e-6);
    CHECK(std::abs(fit.center - 0.4) < 1e-6);
    CHECK(std::abs(fit.offset - 0.013) < 1e-6);
}

TEST_CASE("lorentz_fit pins the offset to the measured background") {
    const Spectrum spec = lorentzian(0.2, 1.1, 0.0, 0.025, -15.0, 15.0, 0.25);
    const LorentzFit fit = lorentz_fit(spec);
    CHECK(fit.offset == flat_baseline(spec.values));
}

TEST_CASE("Gaussian wings fall below the fitted Lorentz") {
    const Spectrum spec = from_function(-15.0, 15.0, 0.1, [](double x) {
        return 0.2 * std::exp(-x * x / (2.0 * 0.8 * 0.8));
    });
    const LorentzFit fit = lorentz_fit(spec);
    CHECK(wing_residual_mean(spec, fit) < 0.0);
}

TEST_CASE("noisy Lorentzians recover gamma inside a 5 sigma band") {
    const double gamma = 1.2;
    const double sigma = 0.002;
    std::mt19937 rng(12345);
    std::normal_distribution<double> noise(0.0, sigma);

    for (int trial = 0; trial < 100; ++trial) {
        Spectrum spec = lorentzian(0.2, gamma, 0.0, 0.01, -60.0, 60.0, 0.25);
        for (auto& v : spec.values) v += noise(rng);
        const LorentzFit fit = lorentz_fit(spec);

        // Standard error of gamma from the free-parameter Jacobian at the
        // optimum.
        const std::size_t n = spec.size();
        Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
        for (std::size_t j = 0; j < n; ++j) {
            const double g = fit.gamma;
            const double d = spec.detunings_mhz[j] - fit.center;
            const double denom = g * g + d * d;
            Eigen::Vector3d row;
            row << g * g / denom, fit.amplitude * 2.0 * g * d * d / (denom * denom),
                fit.amplitude * 2.0 * g * g * d / (denom * denom);
            jtj += row * row.transpose();
        }
        const Eigen::Matrix3d covariance = sigma * sigma * jtj.inverse();
        const double se_gamma = std::sqrt(covariance(1, 1));
        CHECK(std::abs(fit.gamma - gamma) < 5.0 * se_gamma);
    }
}

TEST_CASE("lorentz_fit demands enough points") {
    const Spectrum spec = lorentzian(0.2, 1.0, 0.0, 0.0, -1.0, 1.0, 0.5);  // 5 points
    CHECK_THROWS_AS(lorentz_fit(spec), std::invalid_argument);
}

TEST_CASE("field/detuning mapping around the resonance") {
    const StarkMap map;
    CHECK(field_to_detuning(1.79, map) == doctest::Approx(0.0));
    CHECK(field_to_detuning(1.79 - 0.0164, map) ==
          doctest::Approx(-118.3 * -0.0164).epsilon(1e-12));
    CHECK(field_to_detuning(1.79 - 0.0164, map) == doctest::Approx(1.94012).epsilon(1e-9));

    for (const double field : {1.7, 1.75, 1.8201, 1.88}) {
        const double delta = field_to_detuning(field, map);
        CHECK(detuning_to_field(delta, map) == doctest::Approx(field).epsilon(1e-12));
    }

    CHECK_THROWS_AS(field_to_detuning(1.6, map), std::invalid_argument);
    CHECK_THROWS_AS(field_to_detuning(2.0, map), std::invalid_argument);
    CHECK_THROWS_AS(detuning_to_field(50.0, map), std::invalid_argument);

    StarkMap degenerate;
    degenerate.slope_mhz_per_vcm = 0.0;
    CHECK_THROWS_AS(field_to_detuning(1.79, degenerate), std::invalid_argument);
}

TEST_CASE("baseline estimator uses the outer tenth of the grid") {
    std::vector<double> values(100, 0.0);
    for (std::size_t k = 0; k < values.size(); ++k) {
        values[k] = (k < 5 || k >= 95) ? 0.01 : 1.0;  // outer 10 points low
    }
    CHECK(flat_baseline(values) == doctest::Approx(0.01));
}
