#include <bit>

#include "tcsim/kernels.h"

namespace tcsim::kernels {
namespace {

void xor_words(uint64_t *dst, const uint64_t *src, size_t n) {
    for (size_t i = 0; i < n; i++) {
        dst[i] ^= src[i];
    }
}

uint64_t popcount_words(const uint64_t *a, size_t n) {
    uint64_t total = 0;
    for (size_t i = 0; i < n; i++) {
        total += std::popcount(a[i]);
    }
    return total;
}

bool symplectic_parity(const uint64_t *x1, const uint64_t *z1, const uint64_t *x2,
                       const uint64_t *z2, size_t n) {
    uint64_t acc = 0;
    for (size_t i = 0; i < n; i++) {
        acc ^= (x1[i] & z2[i]) ^ (z1[i] & x2[i]);
    }
    return std::popcount(acc) & 1;
}

unsigned pauli_product_phase(const uint64_t *x1, const uint64_t *z1, const uint64_t *x2,
                             const uint64_t *z2, size_t n) {
    // XY = iZ, YZ = iX, ZX = iY; the reversed orders give -i.
    int total = 0;
    for (size_t i = 0; i < n; i++) {
        uint64_t a_x = x1[i] & ~z1[i], a_y = x1[i] & z1[i], a_z = ~x1[i] & z1[i];
        uint64_t b_x = x2[i] & ~z2[i], b_y = x2[i] & z2[i], b_z = ~x2[i] & z2[i];
        uint64_t plus = (a_x & b_y) | (a_y & b_z) | (a_z & b_x);
        uint64_t minus = (a_y & b_x) | (a_z & b_y) | (a_x & b_z);
        total += std::popcount(plus) - std::popcount(minus);
    }
    return static_cast<unsigned>(((total % 4) + 4) % 4);
}

void bfs_relax(const uint32_t *edges, size_t num_edges, const LaneMask *frontier, LaneMask *next) {
    for (size_t e = 0; e < num_edges; e++) {
        uint32_t u = edges[2 * e];
        uint32_t v = edges[2 * e + 1];
        for (int k = 0; k < 4; k++) {
            next[v].w[k] |= frontier[u].w[k];
            next[u].w[k] |= frontier[v].w[k];
        }
    }
}

bool bfs_settle(LaneMask *next, LaneMask *visited, LaneMask *frontier, size_t num_nodes) {
    uint64_t any = 0;
    for (size_t i = 0; i < num_nodes; i++) {
        for (int k = 0; k < 4; k++) {
            uint64_t fresh = next[i].w[k] & ~visited[i].w[k];
            visited[i].w[k] |= fresh;
            frontier[i].w[k] = fresh;
            next[i].w[k] = 0;
            any |= fresh;
        }
    }
    return any != 0;
}

}  // namespace

const KernelTable &scalar_kernels() {
    static const KernelTable table{
        "scalar",          xor_words, popcount_words, symplectic_parity, pauli_product_phase,
        bfs_relax,         bfs_settle,
    };
    return table;
}

}  // namespace tcsim::kernels
