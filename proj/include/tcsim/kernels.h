#pragma once

// Data-parallel inner loops shared by the tableau engine and the decoder.
//
// Every kernel has a portable scalar reference implementation. When the
// build and the running CPU both support AVX2, an equivalent vectorised
// table is selected at startup. The two tables are checked against each
// other by tests/kernels.test.cc.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace tcsim::kernels {

/// One 256-bit lane block per graph node: bit s set means BFS source s has
/// reached the node.
struct alignas(32) LaneMask {
    uint64_t w[4];
};

inline constexpr size_t kLanes = 256;

struct KernelTable {
    const char *name;

    // dst ^= src over n words.
    void (*xor_words)(uint64_t *dst, const uint64_t *src, size_t n);

    uint64_t (*popcount_words)(const uint64_t *a, size_t n);

    // Parity of the symplectic product <(x1,z1),(x2,z2)>: 1 iff the two
    // Pauli strings anticommute.
    bool (*symplectic_parity)(const uint64_t *x1, const uint64_t *z1, const uint64_t *x2,
                              const uint64_t *z2, size_t n);

    // Exponent (mod 4) of the factor i picked up when multiplying the
    // Pauli string (x1,z1) on the right by (x2,z2), qubit by qubit. Y is
    // encoded as x=z=1.
    unsigned (*pauli_product_phase)(const uint64_t *x1, const uint64_t *z1, const uint64_t *x2,
                                    const uint64_t *z2, size_t n);

    // For every undirected edge (u,v) in `edges` (2*num_edges node ids):
    //   next[v] |= frontier[u]; next[u] |= frontier[v];
    void (*bfs_relax)(const uint32_t *edges, size_t num_edges, const LaneMask *frontier,
                      LaneMask *next);

    // For every node: fresh = next & ~visited; visited |= fresh;
    // frontier = fresh; next = 0. Returns true if any bit was fresh.
    bool (*bfs_settle)(LaneMask *next, LaneMask *visited, LaneMask *frontier, size_t num_nodes);
};

const KernelTable &scalar_kernels();

/// nullptr unless compiled with AVX2 support and the CPU reports AVX2.
const KernelTable *avx2_kernels();

/// The table used by the library. Chosen on first use: AVX2 when available,
/// unless the environment variable TCSIM_SIMD is set to "scalar".
const KernelTable &active();

/// Overrides the active table ("scalar", "avx2" or "auto"). Returns false
/// if the requested table is unavailable; the selection is then unchanged.
bool select(std::string_view name);

}  // namespace tcsim::kernels
