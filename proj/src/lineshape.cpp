#include "foerster/lineshape.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace foerster {

namespace {

void check_spectrum(const Spectrum& spec, std::size_t min_points) {
    if (spec.values.size() != spec.detunings_mhz.size()) {
        throw std::invalid_argument("spectrum columns have different lengths");
    }
    if (spec.size() < min_points) {
        throw std::invalid_argument("spectrum needs at least " + std::to_string(min_points) +
                                    " points, got " + std::to_string(spec.size()));
    }
}

void check_map(const StarkMap& map) {
    if (map.slope_mhz_per_vcm == 0.0) {
        throw std::invalid_argument("Stark map slope must be nonzero");
    }
}

std::size_t argmax(const std::vector<double>& values) {
    return static_cast<std::size_t>(
        std::distance(values.begin(), std::max_element(values.begin(), values.end())));
}

/// Half-max crossing between grid points, scanning outward from the peak.
double crossing(const std::vector<double>& x, const std::vector<double>& y, std::size_t peak,
                double half, bool left) {
    std::size_t k = peak;
    while (true) {
        if (left ? k == 0 : k == y.size() - 1) {
            throw std::runtime_error(std::string("no half-maximum crossing on the ") +
                                     (left ? "left" : "right") +
                                     " side: spectrum too narrow for the grid or non-resonant");
        }
        const std::size_t next = left ? k - 1 : k + 1;
        if (y[next] <= half) {
            const double frac = (y[k] - half) / (y[k] - y[next]);
            return x[k] + frac * (x[next] - x[k]);
        }
        k = next;
    }
}

struct LorentzModel {
    // value and Jacobian row of A g^2/(g^2 + (x-c)^2) + b over (A, g, c)
    static double eval(double x, const Eigen::Vector3d& p, double offset) {
        const double g2 = p[1] * p[1];
        const double d = x - p[2];
        return p[0] * g2 / (g2 + d * d) + offset;
    }
    static Eigen::Vector3d jacobian(double x, const Eigen::Vector3d& p) {
        const double g = p[1];
        const double g2 = g * g;
        const double d = x - p[2];
        const double denom = g2 + d * d;
        Eigen::Vector3d row;
        row[0] = g2 / denom;
        row[1] = p[0] * 2.0 * g * d * d / (denom * denom);
        row[2] = p[0] * 2.0 * g2 * d / (denom * denom);
        return row;
    }
};

}  // namespace

double field_to_detuning(double field_vcm, const StarkMap& map) {
    check_map(map);
    if (std::abs(field_vcm - map.resonance_field_vcm) > kStarkWindowVcm) {
        throw std::invalid_argument("field " + std::to_string(field_vcm) +
                                    " V/cm is outside the linear Stark window " +
                                    std::to_string(map.resonance_field_vcm) + " +/- " +
                                    std::to_string(kStarkWindowVcm) + " V/cm");
    }
    return map.slope_mhz_per_vcm * (field_vcm - map.resonance_field_vcm);
}

double detuning_to_field(double delta_mhz, const StarkMap& map) {
    check_map(map);
    const double field = map.resonance_field_vcm + delta_mhz / map.slope_mhz_per_vcm;
    if (std::abs(field - map.resonance_field_vcm) > kStarkWindowVcm) {
        throw std::invalid_argument("detuning " + std::to_string(delta_mhz) +
                                    " MHz maps outside the linear Stark window");
    }
    return field;
}

double flat_baseline(const std::vector<double>& values) {
    if (values.size() < 2) {
        throw std::invalid_argument("baseline needs at least 2 points");
    }
    const std::size_t per_side = std::max<std::size_t>(1, values.size() / 20);
    std::vector<double> outer;
    outer.reserve(2 * per_side);
    outer.insert(outer.end(), values.begin(), values.begin() + per_side);
    outer.insert(outer.end(), values.end() - per_side, values.end());
    std::sort(outer.begin(), outer.end());
    const std::size_t mid = outer.size() / 2;
    return outer.size() % 2 == 1 ? outer[mid] : 0.5 * (outer[mid - 1] + outer[mid]);
}

double fwhm(const Spectrum& spec) {
    check_spectrum(spec, 4);
    const double base = flat_baseline(spec.values);
    const std::size_t peak = argmax(spec.values);
    const double height = spec.values[peak] - base;
    if (height <= 0.0) {
        throw std::runtime_error("no peak above the baseline");
    }
    const double half = base + 0.5 * height;
    const double left = crossing(spec.detunings_mhz, spec.values, peak, half, true);
    const double right = crossing(spec.detunings_mhz, spec.values, peak, half, false);
    return right - left;
}

double peak_amplitude(const Spectrum& spec) {
    check_spectrum(spec, 2);
    return spec.values[argmax(spec.values)] - flat_baseline(spec.values);
}

LorentzFit lorentz_fit(const Spectrum& spec) {
    check_spectrum(spec, 8);
    const std::size_t n = spec.size();
    const auto& x = spec.detunings_mhz;
    const auto& y = spec.values;

    // The offset is the measured nonresonant background, held at the flat
    // baseline estimate; a free offset would absorb the wing excess this fit
    // exists to expose. A, gamma and center start from the documented
    // initialization (peak, fwhm/2, argmax).
    const double offset = flat_baseline(y);
    const std::size_t peak = argmax(y);
    Eigen::Vector3d p(y[peak] - offset, 0.5 * fwhm(spec), x[peak]);

    auto sse_of = [&](const Eigen::Vector3d& q) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double r = y[j] - LorentzModel::eval(x[j], q, offset);
            s += r * r;
        }
        return s;
    };

    constexpr int kMaxIterations = 500;
    constexpr double kGradientTolerance = 1e-9;
    double mu = 1e-3;
    double sse = sse_of(p);
    int iteration = 0;
    bool converged = false;

    for (; iteration < kMaxIterations; ++iteration) {
        Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
        Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
        for (std::size_t j = 0; j < n; ++j) {
            const Eigen::Vector3d row = LorentzModel::jacobian(x[j], p);
            const double r = y[j] - LorentzModel::eval(x[j], p, offset);
            jtj += row * row.transpose();
            jtr += row * r;
        }
        // grad SSE = -2 J^T r
        if ((2.0 * jtr).cwiseAbs().maxCoeff() < kGradientTolerance) {
            converged = true;
            break;
        }

        bool stepped = false;
        for (int damping = 0; damping < 60 && !stepped; ++damping) {
            Eigen::Matrix3d damped = jtj;
            damped.diagonal().array() += mu;
            const Eigen::Vector3d step = damped.ldlt().solve(jtr);
            const Eigen::Vector3d trial = p + step;
            if (trial[1] > 0.0 && std::isfinite(sse_of(trial)) && sse_of(trial) <= sse) {
                p = trial;
                sse = sse_of(trial);
                mu = std::max(mu / 3.0, 1e-12);
                stepped = true;
            } else {
                mu *= 2.0;
            }
        }
        if (!stepped) {
            break;  // damping saturated; report non-convergence below
        }
    }

    if (!converged) {
        throw std::runtime_error(
            "Lorentz fit did not reach gradient norm < 1e-9 after " + std::to_string(iteration) +
            " iterations; last iterate A = " + std::to_string(p[0]) + ", gamma = " +
            std::to_string(p[1]) + ", center = " + std::to_string(p[2]) + ", offset = " +
            std::to_string(offset));
    }

    LorentzFit fit;
    fit.amplitude = p[0];
    fit.gamma = p[1];
    fit.center = p[2];
    fit.offset = offset;
    fit.sse = sse;
    fit.iterations = iteration;
    fit.residuals.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        fit.residuals[j] = y[j] - LorentzModel::eval(x[j], p, offset);
    }
    return fit;
}

double wing_residual_mean(const Spectrum& spec, const LorentzFit& fit) {
    if (fit.residuals.size() != spec.size()) {
        throw std::invalid_argument("fit residuals do not match the spectrum grid");
    }
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < spec.size(); ++j) {
        if (std::abs(spec.detunings_mhz[j] - fit.center) > 3.0 * fit.gamma) {
            sum += fit.residuals[j];
            ++count;
        }
    }
    if (count == 0) {
        throw std::runtime_error("no grid points beyond 3 gamma from the fitted center");
    }
    return sum / static_cast<double>(count);
}

}  // namespace foerster
