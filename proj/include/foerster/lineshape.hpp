#pragma once

#include <vector>

#include "foerster/montecarlo.hpp"

namespace foerster {

/// Local linear map between the dc electric field and the Foerster detuning
/// around the resonance field. Valid only within kStarkWindowVcm of the
/// resonance; the true Stark dependence is quadratic further out.
struct StarkMap {
    double resonance_field_vcm = 1.79;
    double slope_mhz_per_vcm = -118.3;
    double zero_field_detuning_mhz = 103.0;  // informational
};

inline constexpr double kStarkWindowVcm = 0.1;

/// delta = slope * (F - F_res). Throws outside the linear window.
double field_to_detuning(double field_vcm, const StarkMap& map);
double detuning_to_field(double delta_mhz, const StarkMap& map);

/// Flat-background estimator shared by fwhm and peak_amplitude: median of
/// the outer 10% of grid points (5% from each end).
double flat_baseline(const std::vector<double>& values);

/// Full width at half maximum after baseline subtraction, with the half-max
/// crossings located by linear interpolation. Throws std::runtime_error when
/// a crossing is missing on either side.
double fwhm(const Spectrum& spec);

/// Baseline-subtracted maximum.
double peak_amplitude(const Spectrum& spec);

struct LorentzFit {
    double amplitude = 0.0;
    double gamma = 0.0;  // half width at half maximum, MHz
    double center = 0.0;
    double offset = 0.0;
    double sse = 0.0;
    int iterations = 0;
    std::vector<double> residuals;  // data - fit, per grid point
};

/// Deterministic Levenberg-Marquardt least squares of
/// A gamma^2 / (gamma^2 + (x - c)^2) + offset, with the offset held at the
/// flat-baseline estimate (the measured nonresonant background) and
/// (A, gamma, c) initialized from (peak, fwhm/2, argmax), iterated until the
/// SSE gradient max-norm falls below 1e-9. Throws std::runtime_error with
/// the last iterate on non-convergence.
LorentzFit lorentz_fit(const Spectrum& spec);

/// Mean of (data - fit) over the wings |x - center| > 3 gamma; positive
/// means the data carries more weight in the wings than the fitted Lorentz.
double wing_residual_mean(const Spectrum& spec, const LorentzFit& fit);

}  // namespace foerster
