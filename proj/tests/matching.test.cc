#include <gtest/gtest.h>

#include <algorithm>
#include <climits>
#include <random>

#include "tcsim/decode.h"

namespace tcsim {
namespace {

// Minimum-weight perfect matching by dynamic programming over subsets.
int64_t brute_force_min(const DistanceTable &t) {
    const size_t n = t.n;
    std::vector<int64_t> best(size_t{1} << n, INT64_MAX);
    best[0] = 0;
    for (size_t mask = 0; mask < best.size(); mask++) {
        if (best[mask] == INT64_MAX) continue;
        size_t i = 0;
        while (i < n && (mask >> i & 1)) i++;
        if (i == n) continue;
        for (size_t j = i + 1; j < n; j++) {
            if (mask >> j & 1) continue;
            size_t next = mask | (size_t{1} << i) | (size_t{1} << j);
            best[next] = std::min(best[next], best[mask] + t.at(i, j));
        }
    }
    return best.back();
}

// Maximum-weight (not necessarily perfect) matching on a general graph.
int64_t brute_force_max(int n, const std::vector<WeightedEdge> &edges, bool max_card, int *card_out) {
    std::vector<std::vector<int64_t>> w(n, std::vector<int64_t>(n, -1));
    for (auto e : edges) w[e.u][e.v] = w[e.v][e.u] = std::max(w[e.u][e.v], e.w);
    // best[mask] = (cardinality, weight) over matchings on vertices in mask,
    // processing the lowest vertex first.
    std::vector<std::pair<int, int64_t>> best(size_t{1} << n, {0, 0});
    for (size_t mask = 1; mask < best.size(); mask++) {
        int i = std::countr_zero(mask);
        size_t rest = mask & ~(size_t{1} << i);
        auto b = best[rest];
        for (int j = i + 1; j < n; j++) {
            if (!(rest >> j & 1) || w[i][j] < 0) continue;
            auto s = best[rest & ~(size_t{1} << j)];
            std::pair<int, int64_t> cand{s.first + 1, s.second + w[i][j]};
            bool better = max_card ? cand > b : cand.second > b.second;
            if (better) b = cand;
        }
        best[mask] = b;
    }
    *card_out = best.back().first;
    return best.back().second;
}

DistanceTable random_table(std::mt19937_64 &g, size_t n, uint32_t max_d) {
    DistanceTable t;
    t.n = n;
    t.d.assign(n * n, 0);
    for (size_t i = 0; i < n; i++) {
        for (size_t j = i + 1; j < n; j++) t.d[i * n + j] = t.d[j * n + i] = static_cast<uint32_t>(g() % (max_d + 1));
    }
    return t;
}

int64_t matching_cost(const DistanceTable &t, const std::vector<int> &mate) {
    int64_t w = 0;
    for (size_t i = 0; i < t.n; i++) {
        EXPECT_GE(mate[i], 0);
        EXPECT_EQ(mate[mate[i]], int(i));
        if (int(i) < mate[i]) w += t.at(i, mate[i]);
    }
    return w;
}

TEST(Matching, PerfectMatchingEqualsBruteForce) {
    std::mt19937_64 g(31);
    for (int rep = 0; rep < 1000; rep++) {
        size_t n = 2 * (1 + g() % 5);
        DistanceTable t = random_table(g, n, rep % 3 == 0 ? 3 : 40);
        int64_t expect = brute_force_min(t);
        for (int k : {0, 2, 10}) {
            PerfectMatching m = min_weight_perfect_matching(t, k);
            EXPECT_EQ(m.weight, expect) << "rep " << rep << " k " << k;
            EXPECT_EQ(matching_cost(t, m.mate), expect);
        }
    }
}

TEST(Matching, SparseAndCompleteAgreeOnLargeInstances) {
    std::mt19937_64 g(37);
    for (int rep = 0; rep < 30; rep++) {
        // Points on a small 3-torus give realistic, tie-heavy metrics.
        size_t n = 2 * (20 + g() % 40);
        const int L = 9;
        std::vector<std::array<int, 3>> pts(n);
        for (auto &p : pts) p = {int(g() % L), int(g() % L), int(g() % L)};
        DistanceTable t;
        t.n = n;
        t.d.assign(n * n, 0);
        for (size_t i = 0; i < n; i++) {
            for (size_t j = 0; j < n; j++) {
                uint32_t s = 0;
                for (int a = 0; a < 3; a++) {
                    int d = std::abs(pts[i][a] - pts[j][a]);
                    s += std::min(d, L - d);
                }
                t.d[i * n + j] = s;
            }
        }
        PerfectMatching complete = min_weight_perfect_matching(t, 0);
        PerfectMatching sparse = min_weight_perfect_matching(t, 10);
        PerfectMatching tiny = min_weight_perfect_matching(t, 1);
        EXPECT_TRUE(complete.complete_graph);

        // Cold-start blossom run on the same complete graph.
        uint32_t maxd = *std::max_element(t.d.begin(), t.d.end());
        std::vector<WeightedEdge> edges;
        for (size_t i = 0; i < n; i++) {
            for (size_t j = i + 1; j < n; j++) edges.push_back({int(i), int(j), int64_t(maxd + 1) - t.at(i, j)});
        }
        EXPECT_EQ(matching_cost(t, max_weight_matching(int(n), edges, true)), complete.weight);
        EXPECT_EQ(sparse.weight, complete.weight);
        EXPECT_EQ(tiny.weight, complete.weight);

        // Greedy pairing of closest available nodes is an upper bound.
        std::vector<bool> used(n);
        int64_t greedy = 0;
        std::vector<std::tuple<uint32_t, size_t, size_t>> pairs;
        for (size_t i = 0; i < n; i++) {
            for (size_t j = i + 1; j < n; j++) pairs.emplace_back(t.at(i, j), i, j);
        }
        std::sort(pairs.begin(), pairs.end());
        for (auto [d, i, j] : pairs) {
            if (used[i] || used[j]) continue;
            used[i] = used[j] = true;
            greedy += d;
        }
        EXPECT_LE(complete.weight, greedy);
    }
}

TEST(Matching, MaxWeightMatchingEqualsBruteForce) {
    std::mt19937_64 g(41);
    for (int rep = 0; rep < 500; rep++) {
        int n = 1 + g() % 9;
        std::vector<WeightedEdge> edges;
        for (int i = 0; i < n; i++) {
            for (int j = i + 1; j < n; j++) {
                if (g() % 3 == 0) edges.push_back({i, j, int64_t(g() % 20)});
            }
        }
        for (bool max_card : {false, true}) {
            std::vector<int> mate = max_weight_matching(n, edges, max_card);
            int64_t w = 0;
            int card = 0;
            for (int i = 0; i < n; i++) {
                if (mate[i] < 0) continue;
                ASSERT_EQ(mate[mate[i]], i);
                if (i < mate[i]) {
                    int64_t best = -1;
                    for (auto e : edges) {
                        if ((e.u == i && e.v == mate[i]) || (e.v == i && e.u == mate[i])) best = std::max(best, e.w);
                    }
                    ASSERT_GE(best, 0) << "matched a non-edge";
                    w += best;
                    card++;
                }
            }
            int expect_card = 0;
            int64_t expect = brute_force_max(n, edges, max_card, &expect_card);
            EXPECT_EQ(w, expect) << "rep " << rep << " maxcard " << max_card;
            if (max_card) {
                EXPECT_EQ(card, expect_card);
            }
        }
    }
}

// Checks the dual certificate left by the blossom algorithm: nonnegative
// edge slacks, tight matched edges, nonnegative blossom duals and full
// blossoms wherever the dual is positive.
void verify_certificate(int n, const std::vector<WeightedEdge> &edges, const std::vector<int> &mate,
                        const MatchingDuals &duals) {
    auto ancestors = [&](int v) {
        std::vector<int> out;
        for (int b = duals.parent[v]; b >= 0; b = duals.parent[b]) out.push_back(b);
        return out;
    };
    for (auto e : edges) {
        int64_t s = duals.dual[e.u] + duals.dual[e.v] - 2 * e.w;
        auto a = ancestors(e.u), b = ancestors(e.v);
        for (int x : a) {
            if (std::find(b.begin(), b.end(), x) != b.end()) s += 2 * duals.dual[x];
        }
        EXPECT_GE(s, 0);
        if (mate[e.u] == e.v) {
            EXPECT_EQ(s, 0);
        }
    }
    for (int b = n; b < 2 * n; b++) {
        if (duals.base[b] < 0) continue;
        std::vector<int> members;
        for (int v = 0; v < n; v++) {
            auto a = ancestors(v);
            if (std::find(a.begin(), a.end(), b) != a.end()) members.push_back(v);
        }
        if (members.empty()) continue;
        EXPECT_GE(duals.dual[b], 0);
        if (duals.dual[b] > 0) {
            int inside = 0;
            for (int v : members) {
                if (mate[v] >= 0 && std::find(members.begin(), members.end(), mate[v]) != members.end()) inside++;
            }
            EXPECT_EQ(inside / 2, int(members.size() - 1) / 2);
        }
    }
}

TEST(Matching, DualCertificateHolds) {
    std::mt19937_64 g(43);
    for (int rep = 0; rep < 200; rep++) {
        int n = 2 * (2 + g() % 12);
        std::vector<WeightedEdge> edges;
        for (int i = 0; i < n; i++) {
            for (int j = i + 1; j < n; j++) edges.push_back({i, j, int64_t(1 + g() % 30)});
        }
        for (bool warm : {false, true}) {
            MatchingDuals duals;
            auto mate = max_weight_matching(n, edges, true, &duals, warm);
            ASSERT_EQ(duals.num_vertices, n);
            verify_certificate(n, edges, mate, duals);
        }
    }
}

TEST(Matching, WarmStartGivesTheSameWeight) {
    std::mt19937_64 g(47);
    for (int rep = 0; rep < 300; rep++) {
        int n = 2 * (1 + g() % 15);
        std::vector<WeightedEdge> edges;
        for (int i = 0; i < n; i++) {
            for (int j = i + 1; j < n; j++) edges.push_back({i, j, int64_t(g() % 8)});
        }
        auto weight = [&](const std::vector<int> &mate) {
            int64_t w = 0;
            for (auto e : edges) {
                if (mate[e.u] == e.v) w += e.w;
            }
            return w;
        };
        auto cold = max_weight_matching(n, edges, true, nullptr, false);
        auto warm = max_weight_matching(n, edges, true, nullptr, true);
        EXPECT_EQ(weight(cold), weight(warm));
        EXPECT_TRUE(std::none_of(warm.begin(), warm.end(), [](int m) { return m < 0; }));
    }
}

TEST(Matching, EdgeCases) {
    DistanceTable odd;
    odd.n = 3;
    odd.d.assign(9, 1);
    EXPECT_THROW(min_weight_perfect_matching(odd), std::invalid_argument);
    DistanceTable empty;
    PerfectMatching m = min_weight_perfect_matching(empty);
    EXPECT_TRUE(m.mate.empty());
    EXPECT_EQ(m.weight, 0);
    DistanceTable two;
    two.n = 2;
    two.d = {0, 7, 7, 0};
    EXPECT_EQ(min_weight_perfect_matching(two).weight, 7);
    EXPECT_TRUE(max_weight_matching(0, {}, true).empty());
}

}  // namespace
}  // namespace tcsim
