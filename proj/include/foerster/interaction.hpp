#pragma once

#include <Eigen/Dense>
#include <vector>

#include "foerster/basis.hpp"
#include "foerster/random.hpp"

namespace foerster {

/// Pair-separation floor in um. Geometries with a closer pair are resampled;
/// the 1/R^3 coupling would otherwise blow up for coincident atoms. At the
/// 18 um default volume the rejection probability is below 1e-6 per pair.
inline constexpr double kMinPairSeparationUm = 0.1;

struct AtomConfiguration {
    std::vector<Eigen::Vector3d> positions;  // um, inside [0, L]^3
    double cube_side_um = 0.0;
};

/// Effective C3 constants in MHz*um^3 for the three dipole channels. The
/// default 300 puts a transverse pair at 10 um at 0.3 MHz. The exchange
/// constants default to the Foerster one; override for ab-initio dipole
/// matrix elements.
struct CouplingConstants {
    double c3_forster = 300.0;
    double c3_exchange_s = 300.0;
    double c3_exchange_sp = 300.0;
};

/// Draws atom_count positions i.i.d. uniform in [0, L]^3, resampling the
/// whole configuration while any pair is closer than the separation floor.
/// Throws std::runtime_error after 1000 consecutive rejections.
AtomConfiguration sample_positions(int atom_count, double cube_side_um, RandomStream& stream);

/// Dipole-dipole coupling c3 * (1 - 3 (Z/R)^2) / R^3 in MHz, where Z is the
/// separation component along the dc field axis (z).
double pair_coupling(const Eigen::Vector3d& a, const Eigen::Vector3d& b, double c3);

/// Dense Hermitian Hamiltonian over the collective basis, in MHz (linear
/// frequency). The diagonal of an m-flip state is m * delta; phase evolution
/// multiplies by 2 pi in the propagator.
struct InteractionHamiltonian {
    Eigen::MatrixXcd matrix;
    double delta_mhz = 0.0;

    int dim() const { return static_cast<int>(matrix.rows()); }
};

/// Assembles the Hamiltonian: diagonal m * delta, off-diagonal couplings only
/// between states differing on exactly two atoms, routed through the three
/// channels (P,P)<->(S,S')/(S',S), (S,P)<->(P,S) and (S',P)<->(P,S').
/// (S,S')<->(S',S) stays zero: no single dipole connects S to S'.
InteractionHamiltonian build_hamiltonian(const CollectiveBasis& basis,
                                         const AtomConfiguration& config,
                                         double delta_mhz,
                                         const CouplingConstants& constants);

}  // namespace foerster
