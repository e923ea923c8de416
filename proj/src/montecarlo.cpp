#include "foerster/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>

#include "foerster/evolution.hpp"

namespace foerster {

namespace {

void validate_request(const SpectrumRequest& request) {
    if (request.n_realizations < 1) {
        throw std::invalid_argument("n_realizations must be >= 1, got " +
                                    std::to_string(request.n_realizations));
    }
    if (request.detunings_mhz.empty()) {
        throw std::invalid_argument("detuning grid is empty");
    }
    for (std::size_t k = 0; k < request.detunings_mhz.size(); ++k) {
        if (!std::isfinite(request.detunings_mhz[k])) {
            throw std::invalid_argument("detuning grid contains a non-finite value at index " +
                                        std::to_string(k));
        }
        if (k > 0 && request.detunings_mhz[k] <= request.detunings_mhz[k - 1]) {
            throw std::invalid_argument("detuning grid must be strictly ascending at index " +
                                        std::to_string(k));
        }
    }
    if (request.t0_us < 0.0) {
        throw std::invalid_argument("interaction time must be >= 0, got " +
                                    std::to_string(request.t0_us));
    }
}

struct RealizationFailure {
    int realization = 0;
    std::string what;
};

}  // namespace

std::vector<double> detuning_grid(double min_mhz, double max_mhz, double step_mhz) {
    if (!(step_mhz > 0.0)) {
        throw std::invalid_argument("grid step must be positive, got " + std::to_string(step_mhz));
    }
    if (max_mhz < min_mhz) {
        throw std::invalid_argument("grid maximum " + std::to_string(max_mhz) +
                                    " is below the minimum " + std::to_string(min_mhz));
    }
    const auto count = static_cast<std::size_t>(std::floor((max_mhz - min_mhz) / step_mhz + 1e-9)) + 1;
    std::vector<double> grid(count);
    for (std::size_t k = 0; k < count; ++k) {
        grid[k] = min_mhz + static_cast<double>(k) * step_mhz;
    }
    return grid;
}

Spectrum simulate_spectrum(const SpectrumRequest& request, int workers) {
    validate_request(request);
    const CollectiveBasis basis = enumerate_states(request.atom_count);
    const StateVector psi0 = all_p_state(basis);

    const std::size_t n_det = request.detunings_mhz.size();
    const int n_real = request.n_realizations;
    std::vector<double> samples(static_cast<std::size_t>(n_real) * n_det);

    std::atomic<int> next{0};
    std::mutex failure_mutex;
    std::optional<RealizationFailure> failure;

    auto run_realization = [&](int r) {
        RandomStream stream = realization_stream(request.seed, static_cast<std::uint64_t>(r));
        const AtomConfiguration config =
            sample_positions(request.atom_count, request.cube_side_um, stream);
        for (std::size_t d = 0; d < n_det; ++d) {
            const double delta = request.detunings_mhz[d];
            try {
                const InteractionHamiltonian h =
                    build_hamiltonian(basis, config, delta, request.constants);
                const StateVector psi = propagate(h, psi0, request.t0_us);
                samples[static_cast<std::size_t>(r) * n_det + d] = transfer_fraction(psi, basis);
            } catch (const std::exception& e) {
                throw std::runtime_error("at delta = " + std::to_string(delta) + " MHz: " +
                                         e.what());
            }
        }
    };

    auto worker_loop = [&] {
        for (int r = next.fetch_add(1); r < n_real; r = next.fetch_add(1)) {
            try {
                run_realization(r);
            } catch (const std::exception& e) {
                std::lock_guard lock(failure_mutex);
                if (!failure || r < failure->realization) {
                    failure = RealizationFailure{r, e.what()};
                }
                return;
            }
        }
    };

    int n_workers = workers;
    if (n_workers <= 0) {
        n_workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    }
    n_workers = std::min(n_workers, n_real);

    if (n_workers == 1) {
        worker_loop();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_workers));
        for (int w = 0; w < n_workers; ++w) {
            pool.emplace_back(worker_loop);
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    if (failure) {
        throw std::runtime_error("realization " + std::to_string(failure->realization) +
                                 " failed: " + failure->what);
    }

    // Fixed ascending-realization reduction keeps multi-worker runs bitwise
    // reproducible.
    Spectrum spectrum;
    spectrum.detunings_mhz = request.detunings_mhz;
    spectrum.values.resize(n_det);
    spectrum.stderrs.resize(n_det);
    spectrum.meta = request;
    for (std::size_t d = 0; d < n_det; ++d) {
        double sum = 0.0;
        for (int r = 0; r < n_real; ++r) {
            sum += samples[static_cast<std::size_t>(r) * n_det + d];
        }
        const double mean = sum / static_cast<double>(n_real);
        double sq = 0.0;
        for (int r = 0; r < n_real; ++r) {
            const double dev = samples[static_cast<std::size_t>(r) * n_det + d] - mean;
            sq += dev * dev;
        }
        spectrum.values[d] = mean;
        spectrum.stderrs[d] =
            n_real > 1 ? std::sqrt(sq / (static_cast<double>(n_real) * (n_real - 1.0))) : 0.0;
    }
    return spectrum;
}

}  // namespace foerster
