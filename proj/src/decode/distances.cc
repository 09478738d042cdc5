#include <algorithm>
#include <bit>
#include <deque>
#include <stdexcept>

#include "tcsim/decode.h"
#include "tcsim/kernels.h"

namespace tcsim {

DistanceTable defect_distances(const Lattice &lat, const SupercellPartition &part, const BitVector &lost,
                               std::span<const uint32_t> groups) {
    using kernels::kLanes;
    using kernels::LaneMask;

    DistanceTable table;
    const size_t m = groups.size();
    table.n = m;
    table.d.assign(m * m, UINT32_MAX);
    if (m == 0) return table;

    // Quotient graph: one node per supercell, one edge per non-lost face
    // joining two different supercells.
    const size_t num_nodes = part.num_groups();
    std::vector<uint32_t> edges;
    edges.reserve(2 * lat.num_faces());
    for (uint32_t f = 0; f < lat.num_faces(); f++) {
        if (lost[f]) continue;
        const auto &c = lat.incident_cells(f);
        uint32_t a = part.group_of[c[0]], b = part.group_of[c[1]];
        if (a == b) continue;
        edges.push_back(a);
        edges.push_back(b);
    }
    const size_t num_edges = edges.size() / 2;

    const auto &k = kernels::active();
    std::vector<LaneMask> frontier(num_nodes), next(num_nodes), visited(num_nodes);

    // 256 sources per pass, one bit lane each.
    for (size_t first = 0; first < m; first += kLanes) {
        const size_t lanes = std::min(kLanes, m - first);
        std::fill(frontier.begin(), frontier.end(), LaneMask{});
        std::fill(next.begin(), next.end(), LaneMask{});
        std::fill(visited.begin(), visited.end(), LaneMask{});
        for (size_t s = 0; s < lanes; s++) {
            uint32_t g = groups[first + s];
            frontier[g].w[s >> 6] |= uint64_t{1} << (s & 63);
            visited[g].w[s >> 6] |= uint64_t{1} << (s & 63);
            table.d[(first + s) * m + first + s] = 0;
        }
        size_t remaining = lanes * m - lanes;
        for (uint32_t level = 1; remaining > 0; level++) {
            k.bfs_relax(edges.data(), num_edges, frontier.data(), next.data());
            if (!k.bfs_settle(next.data(), visited.data(), frontier.data(), num_nodes)) break;
            for (size_t t = 0; t < m; t++) {
                const LaneMask &fresh = frontier[groups[t]];
                for (int w = 0; w < 4; w++) {
                    uint64_t bits = fresh.w[w];
                    while (bits) {
                        size_t s = 64 * w + std::countr_zero(bits);
                        bits &= bits - 1;
                        table.d[(first + s) * m + t] = level;
                        remaining--;
                    }
                }
            }
        }
        if (remaining > 0) throw std::logic_error("defect graph is disconnected");
    }
    return table;
}

std::vector<std::vector<uint32_t>> witness_paths(const Lattice &lat, const SupercellPartition &part,
                                                 const BitVector &lost,
                                                 std::span<const std::pair<uint32_t, uint32_t>> pairs) {
    const uint32_t n = lat.num_cells();
    std::vector<uint32_t> dist(n, UINT32_MAX), via(n, UINT32_MAX), touched;
    std::deque<uint32_t> dq;
    std::vector<std::vector<uint32_t>> out;
    out.reserve(pairs.size());

    for (auto [group_a, group_b] : pairs) {
        for (uint32_t c : touched) {
            dist[c] = UINT32_MAX;
            via[c] = UINT32_MAX;
        }
        touched.clear();
        dq.clear();
        for (uint32_t c : part.members.at(group_a)) {
            dist[c] = 0;
            touched.push_back(c);
            dq.push_back(c);
        }
        // 0-1 breadth-first search: lost faces are free.
        uint32_t hit = UINT32_MAX;
        while (!dq.empty()) {
            uint32_t c = dq.front();
            dq.pop_front();
            if (part.group_of[c] == group_b) {
                hit = c;
                break;
            }
            for (uint32_t f : lat.faces_of_cell(c)) {
                uint32_t o = lat.across(c, f);
                uint32_t w = lost[f] ? 0 : 1;
                if (dist[c] + w < dist[o]) {
                    if (dist[o] == UINT32_MAX) touched.push_back(o);
                    dist[o] = dist[c] + w;
                    via[o] = f;
                    if (w) {
                        dq.push_back(o);
                    } else {
                        dq.push_front(o);
                    }
                }
            }
        }
        if (hit == UINT32_MAX) throw std::logic_error("no path between supercells");
        auto &path = out.emplace_back();
        for (uint32_t c = hit; via[c] != UINT32_MAX; c = lat.across(c, via[c])) path.push_back(via[c]);
        std::reverse(path.begin(), path.end());
    }
    return out;
}

std::vector<uint32_t> witness_path(const Lattice &lat, const SupercellPartition &part, const BitVector &lost,
                                   uint32_t group_a, uint32_t group_b) {
    const std::pair<uint32_t, uint32_t> pair{group_a, group_b};
    return std::move(witness_paths(lat, part, lost, std::span(&pair, 1)).front());
}

}  // namespace tcsim
