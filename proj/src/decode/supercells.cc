#include <algorithm>
#include <stdexcept>

#include "tcsim/decode.h"

namespace tcsim {

SupercellPartition build_supercells(const Lattice &lat, const BitVector &lost) {
    const uint32_t n = lat.num_cells();
    constexpr uint32_t kUnset = UINT32_MAX;
    SupercellPartition part;
    part.group_of.assign(n, kUnset);

    std::vector<uint32_t> stack;
    for (uint32_t start = 0; start < n; start++) {
        if (part.group_of[start] != kUnset) continue;
        const uint32_t g = static_cast<uint32_t>(part.members.size());
        auto &members = part.members.emplace_back();
        part.group_of[start] = g;
        stack.assign(1, start);
        while (!stack.empty()) {
            uint32_t c = stack.back();
            stack.pop_back();
            members.push_back(c);
            for (uint32_t f : lat.faces_of_cell(c)) {
                if (!lost[f]) continue;
                uint32_t o = lat.across(c, f);
                if (part.group_of[o] == kUnset) {
                    part.group_of[o] = g;
                    stack.push_back(o);
                }
            }
        }
        std::sort(members.begin(), members.end());
    }
    part.parity.assign(part.members.size(), 0);
    return part;
}

BitVector cell_parities(const Lattice &lat, const BitVector &chain) {
    BitVector par(lat.num_cells());
    for (uint32_t f : chain.ones()) {
        const auto &c = lat.incident_cells(f);
        par.flip(c[0]);
        par.flip(c[1]);
    }
    return par;
}

std::vector<uint32_t> extract_syndrome(const Lattice &lat, const BitVector &chain, SupercellPartition &part) {
    BitVector par = cell_parities(lat, chain);
    part.parity.assign(part.num_groups(), 0);
    for (uint32_t c : par.ones()) part.parity[part.group_of[c]] ^= 1;
    std::vector<uint32_t> odd;
    for (uint32_t g = 0; g < part.num_groups(); g++) {
        if (part.parity[g]) odd.push_back(g);
    }
    if (odd.size() % 2) {
        throw std::logic_error("odd number of defects (" + std::to_string(odd.size()) + ")");
    }
    return odd;
}

}  // namespace tcsim
