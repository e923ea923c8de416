#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace foerster {

/// Single-atom level taking part in the resonant energy transfer:
/// P = 37P3/2 (|MJ| = 1/2), S = 37S1/2, Sp = 38S1/2. Noninteracting 37P1/2
/// atoms are not basis members; they enter only through the detection chain.
enum class AtomLevel : std::uint8_t { P = 0, S = 1, Sp = 2 };

const char* level_label(AtomLevel level);

/// One assignment of levels to all atoms. Every completed pair conversion
/// produces one S and one S' atom together, so a valid state has
/// count(S) == count(Sp) == flips and count(P) == atom_count - 2 * flips.
struct CollectiveState {
    std::vector<AtomLevel> levels;
    int flips = 0;

    /// Throws std::invalid_argument if count(S) != count(Sp).
    explicit CollectiveState(std::vector<AtomLevel> lv);
};

/// Number of completed pair conversions, counted from the levels.
int flip_count(const CollectiveState& state);

inline constexpr int kMaxAtomCount = 8;

/// All collective states for a fixed atom count, ordered lexicographically
/// with P < S < Sp. Ordinal 0 is always the all-P state. The ordering is a
/// determinism prerequisite: Hamiltonian layouts and golden spectra depend
/// on it.
struct CollectiveBasis {
    int atom_count = 0;
    std::vector<CollectiveState> states;
    std::map<std::vector<AtomLevel>, int> index;

    int dimension() const { return static_cast<int>(states.size()); }
    int index_of(const CollectiveState& state) const;
};

/// Enumerates the basis for atom_count in [1, 8].
CollectiveBasis enumerate_states(int atom_count);

}  // namespace foerster
