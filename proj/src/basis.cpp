#include "foerster/basis.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace foerster {

namespace {

int count_level(const std::vector<AtomLevel>& levels, AtomLevel level) {
    return static_cast<int>(std::count(levels.begin(), levels.end(), level));
}

}  // namespace

const char* level_label(AtomLevel level) {
    switch (level) {
        case AtomLevel::P: return "P";
        case AtomLevel::S: return "S";
        case AtomLevel::Sp: return "S'";
    }
    return "?";
}

CollectiveState::CollectiveState(std::vector<AtomLevel> lv) : levels(std::move(lv)) {
    const int n_s = count_level(levels, AtomLevel::S);
    const int n_sp = count_level(levels, AtomLevel::Sp);
    if (n_s != n_sp) {
        throw std::invalid_argument("collective state requires count(S) == count(S'), got " +
                                    std::to_string(n_s) + " S and " + std::to_string(n_sp) +
                                    " S' atoms");
    }
    flips = n_s;
}

int flip_count(const CollectiveState& state) {
    return count_level(state.levels, AtomLevel::S);
}

int CollectiveBasis::index_of(const CollectiveState& state) const {
    const auto it = index.find(state.levels);
    if (it == index.end()) {
        throw std::invalid_argument("state is not a member of the basis");
    }
    return it->second;
}

CollectiveBasis enumerate_states(int atom_count) {
    if (atom_count < 1 || atom_count > kMaxAtomCount) {
        throw std::domain_error("atom count must be in [1, " + std::to_string(kMaxAtomCount) +
                                "], got " + std::to_string(atom_count));
    }

    CollectiveBasis basis;
    basis.atom_count = atom_count;

    // Walk all 3^i level assignments in lexicographic order (P < S < S') and
    // keep those reachable by whole pair flips. The first kept assignment is
    // the all-P state, so it lands at ordinal 0.
    std::vector<AtomLevel> levels(atom_count, AtomLevel::P);
    while (true) {
        if (count_level(levels, AtomLevel::S) == count_level(levels, AtomLevel::Sp)) {
            basis.states.emplace_back(CollectiveState(levels));
        }
        int pos = atom_count - 1;
        while (pos >= 0 && levels[pos] == AtomLevel::Sp) {
            levels[pos] = AtomLevel::P;
            --pos;
        }
        if (pos < 0) {
            break;
        }
        levels[pos] = static_cast<AtomLevel>(static_cast<int>(levels[pos]) + 1);
    }

    for (int k = 0; k < basis.dimension(); ++k) {
        basis.index.emplace(basis.states[k].levels, k);
    }
    return basis;
}

}  // namespace foerster
