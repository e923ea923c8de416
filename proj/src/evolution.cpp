#include "foerster/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace foerster {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_input(const InteractionHamiltonian& h, const StateVector& psi0, double t_us) {
    if (t_us < 0.0) {
        throw std::invalid_argument("propagation time must be >= 0, got " + std::to_string(t_us));
    }
    if (h.dim() != psi0.size()) {
        throw std::invalid_argument("state dimension " + std::to_string(psi0.size()) +
                                    " does not match Hamiltonian dimension " +
                                    std::to_string(h.dim()));
    }
    const double drift = std::abs(psi0.norm() - 1.0);
    if (drift > 1e-6) {
        throw std::invalid_argument("initial state is not normalized: |norm - 1| = " +
                                    std::to_string(drift));
    }
}

}  // namespace

StateVector all_p_state(const CollectiveBasis& basis) {
    StateVector psi = StateVector::Zero(basis.dimension());
    psi(0) = 1.0;
    return psi;
}

StateVector propagate(const InteractionHamiltonian& h, const StateVector& psi0, double t_us) {
    check_input(h, psi0, t_us);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.matrix);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("Hermitian eigendecomposition did not converge: dim = " +
                                 std::to_string(h.dim()) + ", delta = " +
                                 std::to_string(h.delta_mhz) + " MHz, max|H| = " +
                                 std::to_string(h.matrix.cwiseAbs().maxCoeff()) + " MHz");
    }

    const Eigen::VectorXd& energies = solver.eigenvalues();
    const Eigen::MatrixXcd& modes = solver.eigenvectors();
    Eigen::VectorXcd phases(h.dim());
    for (int k = 0; k < h.dim(); ++k) {
        phases(k) = std::exp(std::complex<double>(0.0, -kTwoPi * energies(k) * t_us));
    }
    return modes * (phases.asDiagonal() * (modes.adjoint() * psi0));
}

StateVector propagate_rk4(const InteractionHamiltonian& h, const StateVector& psi0, double t_us) {
    check_input(h, psi0, t_us);
    if (t_us == 0.0) {
        return psi0;
    }

    // Row-sum norm bounds the spectral radius, so the per-step phase
    // 2 pi |H| dt is capped for every eigenmode.
    const double h_norm = h.matrix.cwiseAbs().rowwise().sum().maxCoeff();
    if (h_norm == 0.0) {
        return psi0;
    }
    const double omega = kTwoPi * h_norm;
    double dt = 0.05 / omega;
    // Tighten the step until the accumulated O(dt^4) truncation error,
    // t * omega^5 dt^4 / 120, stays near 1e-8 over the full interval.
    const double accuracy_dt = std::pow(1e-8 * 120.0 / (std::pow(omega, 5) * t_us), 0.25);
    dt = std::min(dt, accuracy_dt);
    if (dt < 1e-9) {
        throw std::runtime_error("RK4 step underflow: |H| = " + std::to_string(h_norm) +
                                 " MHz over " + std::to_string(t_us) +
                                 " us demands a step below 1e-9 us");
    }

    const auto n_steps = static_cast<long>(std::ceil(t_us / dt));
    dt = t_us / static_cast<double>(n_steps);
    const std::complex<double> rate(0.0, -kTwoPi);

    StateVector psi = psi0;
    StateVector k1(h.dim()), k2(h.dim()), k3(h.dim()), k4(h.dim());
    for (long step = 0; step < n_steps; ++step) {
        k1 = rate * (h.matrix * psi);
        k2 = rate * (h.matrix * (psi + (0.5 * dt) * k1));
        k3 = rate * (h.matrix * (psi + (0.5 * dt) * k2));
        k4 = rate * (h.matrix * (psi + dt * k3));
        psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return psi;
}

double transfer_fraction(const StateVector& psi, const CollectiveBasis& basis) {
    if (psi.size() != basis.dimension()) {
        throw std::invalid_argument("state dimension " + std::to_string(psi.size()) +
                                    " does not match basis dimension " +
                                    std::to_string(basis.dimension()));
    }
    double fraction = 0.0;
    for (int k = 0; k < basis.dimension(); ++k) {
        fraction += std::norm(psi(k)) * static_cast<double>(basis.states[k].flips);
    }
    fraction /= static_cast<double>(basis.atom_count);
    return std::clamp(fraction, 0.0, 0.5);  // roundoff guard only
}

}  // namespace foerster
