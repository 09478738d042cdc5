#pragma once

// Loss-adapted matching decoder for the primal cluster on the torus.
//
// Pipeline per trial: cells joined by lost faces form supercells; odd
// supercells are the defects; defects are paired by an exact minimum-weight
// perfect matching on shortest-path distances (lost faces cost nothing);
// the correction is the union of the witness paths. The residual chain is
// closed over the lost faces and classified by its winding parities.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tcsim/bitvec.h"
#include "tcsim/channel.h"
#include "tcsim/lattice.h"

namespace tcsim {

struct SupercellPartition {
    std::vector<uint32_t> group_of;              // cell -> group; groups numbered by smallest member cell
    std::vector<std::vector<uint32_t>> members;  // sorted cell lists
    std::vector<uint8_t> parity;                 // filled by extract_syndrome

    size_t num_groups() const { return members.size(); }
};

/// Connected components of the cells under adjacency through lost faces.
SupercellPartition build_supercells(const Lattice &lat, const BitVector &lost);

/// Parity of `chain` at every cell: bit c is the XOR of chain over the six faces of c.
BitVector cell_parities(const Lattice &lat, const BitVector &chain);

/// Fills part.parity from `chain` and returns the odd groups in increasing
/// order. Throws std::logic_error if their number is odd.
std::vector<uint32_t> extract_syndrome(const Lattice &lat, const BitVector &chain, SupercellPartition &part);

/// Pairwise shortest-path distances between the given groups, counting
/// non-lost faces crossed.
struct DistanceTable {
    size_t n = 0;
    std::vector<uint32_t> d;  // row-major n x n
    uint32_t at(size_t a, size_t b) const { return d[a * n + b]; }
};

DistanceTable defect_distances(const Lattice &lat, const SupercellPartition &part, const BitVector &lost,
                               std::span<const uint32_t> groups);

/// One minimal path from group a to group b, as the faces crossed in order
/// (lost faces included). The number of non-lost faces equals the distance.
std::vector<uint32_t> witness_path(const Lattice &lat, const SupercellPartition &part, const BitVector &lost,
                                   uint32_t group_a, uint32_t group_b);

/// witness_path for several pairs, sharing the search buffers.
std::vector<std::vector<uint32_t>> witness_paths(const Lattice &lat, const SupercellPartition &part,
                                                 const BitVector &lost,
                                                 std::span<const std::pair<uint32_t, uint32_t>> pairs);

// ---------------------------------------------------------------------------
// Matching.

struct WeightedEdge {
    int u = 0, v = 0;
    int64_t w = 0;
};

/// Dual solution left by max_weight_matching, indexed like its internal
/// arrays: slots [0, n) are vertices, [n, 2n) blossoms. Vertex duals are
/// stored doubled so that slack(u,v) = dual[u] + dual[v] - 2w.
struct MatchingDuals {
    int num_vertices = 0;
    std::vector<int64_t> dual;
    std::vector<int> parent;  // enclosing blossom or -1
    std::vector<int> base;    // -1 for unused blossom slots
};

/// Maximum-weight matching on a general graph (Edmonds' blossom algorithm
/// with primal-dual updates, O(n^3)). With max_cardinality it returns a
/// maximum-weight matching among those of maximum cardinality. Returns
/// mate[v] (or -1). Integer weights keep the duals exact. warm_start
/// (max-cardinality mode only) begins from a greedy matching on edges that
/// are tight under per-vertex maximum-weight duals.
std::vector<int> max_weight_matching(int num_vertices, std::span<const WeightedEdge> edges, bool max_cardinality,
                                     MatchingDuals *duals = nullptr, bool warm_start = false);

struct PerfectMatching {
    std::vector<int> mate;
    int64_t weight = 0;       // total distance
    int rounds = 0;           // blossom runs until the certificate held
    bool complete_graph = false;
};

/// Exact minimum-weight perfect matching on the complete graph with the
/// given distances. It first solves a sparse graph of each node's
/// `neighbors` nearest nodes, then checks the dual solution against every
/// pair and adds violated pairs until optimality is certified. neighbors = 0
/// solves the complete graph directly. Throws std::invalid_argument for odd n.
PerfectMatching min_weight_perfect_matching(const DistanceTable &dist, int neighbors = 10);

// ---------------------------------------------------------------------------
// Homology and the full trial.

struct HomologyClass {
    std::array<uint8_t, 3> w{};
    bool trivial() const { return (w[0] | w[1] | w[2]) == 0; }
    bool operator==(const HomologyClass &) const = default;
    std::string str() const;  // "(wx,wy,wz)"
};

/// Parity of the faces of normal mu whose owner coordinate mu is L-1.
/// Throws std::invalid_argument if the chain has a boundary.
HomologyClass winding_parity(const Lattice &lat, const BitVector &chain);

struct DecoderOptions {
    int matching_neighbors = 10;
};

struct DecodeTrace {
    SupercellPartition partition;
    std::vector<uint32_t> syndrome;                        // odd group ids
    std::vector<std::pair<uint32_t, uint32_t>> matching;   // group id pairs
    int64_t matching_weight = 0;
    BitVector correction;
    BitVector residual;
};

struct DecodeResult {
    bool failed = false;
    HomologyClass cls;
    uint32_t defect_count = 0;
    uint32_t num_groups = 0;
};

/// Decodes one error configuration. Throws std::logic_error if an internal
/// consistency check (even syndrome, closed residual) fails.
DecodeResult decode_trial(const ErrorConfig &cfg, const Lattice &lat, const DecoderOptions &opts = {},
                          DecodeTrace *trace = nullptr);

}  // namespace tcsim
