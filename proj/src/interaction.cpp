#include "foerster/interaction.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace foerster {

namespace {

constexpr int kMaxRejections = 1000;

bool pair_too_close(const AtomConfiguration& config) {
    const auto n = config.positions.size();
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            if ((config.positions[a] - config.positions[b]).norm() < kMinPairSeparationUm) {
                return true;
            }
        }
    }
    return false;
}

/// C3 constant for the channel connecting two states that differ exactly at
/// one atom pair, or 0 when no single dipole pair links them.
double channel_c3(AtomLevel xa, AtomLevel xb, AtomLevel ya, AtomLevel yb,
                  const CouplingConstants& constants) {
    using L = AtomLevel;
    const bool x_pp = (xa == L::P && xb == L::P);
    const bool y_pp = (ya == L::P && yb == L::P);
    const bool x_flip = (xa == L::S && xb == L::Sp) || (xa == L::Sp && xb == L::S);
    const bool y_flip = (ya == L::S && yb == L::Sp) || (ya == L::Sp && yb == L::S);
    if ((x_pp && y_flip) || (y_pp && x_flip)) {
        return constants.c3_forster;
    }
    if ((xa == L::S && xb == L::P && ya == L::P && yb == L::S) ||
        (xa == L::P && xb == L::S && ya == L::S && yb == L::P)) {
        return constants.c3_exchange_s;
    }
    if ((xa == L::Sp && xb == L::P && ya == L::P && yb == L::Sp) ||
        (xa == L::P && xb == L::Sp && ya == L::Sp && yb == L::P)) {
        return constants.c3_exchange_sp;
    }
    return 0.0;  // includes (S,S') <-> (S',S)
}

}  // namespace

AtomConfiguration sample_positions(int atom_count, double cube_side_um, RandomStream& stream) {
    if (atom_count < 1) {
        throw std::invalid_argument("atom count must be >= 1, got " + std::to_string(atom_count));
    }
    if (!(cube_side_um > 0.0)) {
        throw std::invalid_argument("cube side must be positive, got " +
                                    std::to_string(cube_side_um));
    }

    AtomConfiguration config;
    config.cube_side_um = cube_side_um;
    config.positions.resize(atom_count);
    for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
        for (auto& p : config.positions) {
            p = Eigen::Vector3d(stream.uniform01() * cube_side_um,
                                stream.uniform01() * cube_side_um,
                                stream.uniform01() * cube_side_um);
        }
        if (atom_count == 1 || !pair_too_close(config)) {
            return config;
        }
    }
    throw std::runtime_error("no admissible geometry after " + std::to_string(kMaxRejections) +
                             " attempts: the " + std::to_string(kMinPairSeparationUm) +
                             " um pair-separation floor is incompatible with " +
                             std::to_string(atom_count) + " atoms in a " +
                             std::to_string(cube_side_um) + " um cube");
}

double pair_coupling(const Eigen::Vector3d& a, const Eigen::Vector3d& b, double c3) {
    const Eigen::Vector3d d = b - a;
    const double r2 = d.squaredNorm();
    const double r = std::sqrt(r2);
    if (r < kMinPairSeparationUm) {
        throw std::domain_error("pair separation " + std::to_string(r) + " um is below the " +
                                std::to_string(kMinPairSeparationUm) +
                                " um floor; geometry invariant breached");
    }
    const double cos2 = (d.z() * d.z()) / r2;
    return c3 * (1.0 - 3.0 * cos2) / (r2 * r);
}

InteractionHamiltonian build_hamiltonian(const CollectiveBasis& basis,
                                         const AtomConfiguration& config,
                                         double delta_mhz,
                                         const CouplingConstants& constants) {
    const int atoms = static_cast<int>(config.positions.size());
    if (basis.atom_count != atoms) {
        throw std::invalid_argument("basis atom count " + std::to_string(basis.atom_count) +
                                    " does not match configuration with " + std::to_string(atoms) +
                                    " positions");
    }

    const int dim = basis.dimension();
    InteractionHamiltonian h;
    h.delta_mhz = delta_mhz;
    h.matrix = Eigen::MatrixXcd::Zero(dim, dim);

    for (int k = 0; k < dim; ++k) {
        h.matrix(k, k) = static_cast<double>(basis.states[k].flips) * delta_mhz;
    }

    for (int x = 0; x < dim; ++x) {
        const auto& lx = basis.states[x].levels;
        for (int y = x + 1; y < dim; ++y) {
            const auto& ly = basis.states[y].levels;
            int a = -1, b = -1, differing = 0;
            for (int site = 0; site < atoms && differing <= 2; ++site) {
                if (lx[site] != ly[site]) {
                    (differing == 0 ? a : b) = site;
                    ++differing;
                }
            }
            if (differing != 2) {
                continue;
            }
            const double c3 = channel_c3(lx[a], lx[b], ly[a], ly[b], constants);
            if (c3 == 0.0) {
                continue;
            }
            const double v = pair_coupling(config.positions[a], config.positions[b], c3);
            // Assign both triangles from the same value: H == H^dag exactly.
            h.matrix(x, y) = v;
            h.matrix(y, x) = v;
        }
    }
    return h;
}

}  // namespace foerster
