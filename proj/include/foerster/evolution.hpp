#pragma once

#include <Eigen/Dense>

#include "foerster/basis.hpp"
#include "foerster/interaction.hpp"

namespace foerster {

using StateVector = Eigen::VectorXcd;

/// |P...P>, ordinal 0 of the basis.
StateVector all_p_state(const CollectiveBasis& basis);

/// Exact propagation through the Hermitian eigendecomposition:
/// psi(t) = U exp(-i 2 pi E t) U^dag psi0, with E in MHz and t in us.
StateVector propagate(const InteractionHamiltonian& h, const StateVector& psi0, double t_us);

/// Fixed-step classic RK4 integration of dpsi/dt = -i 2 pi H psi, kept as an
/// independent check on propagate. The step keeps the per-step phase
/// 2 pi |H| dt at or below 0.05 and the accumulated truncation error near
/// 1e-8. No renormalization is applied, so norm drift is the error signal.
StateVector propagate_rk4(const InteractionHamiltonian& h, const StateVector& psi0, double t_us);

/// Fraction of atoms in the 37S state: sum_k |psi_k|^2 m_k / atom_count.
/// Bounded by 0.5 (complete coherent transfer).
double transfer_fraction(const StateVector& psi, const CollectiveBasis& basis);

}  // namespace foerster
