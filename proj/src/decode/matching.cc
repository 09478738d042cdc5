// Maximum-weight general matching after J. Edmonds, with the primal-dual
// bookkeeping of Z. Galil, "Efficient algorithms for finding maximum
// matching in graphs" (1986), following the structure of Joris van
// Rantwijk's public-domain mwmatching.py. Integer weights only.

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "tcsim/decode.h"

namespace tcsim {
namespace {

class Matcher {
   public:
    Matcher(int n, std::span<const WeightedEdge> edges, bool max_cardinality, bool warm_start)
        : nv_(n), ne_(static_cast<int>(edges.size())), edges_(edges), maxcard_(max_cardinality) {
        endpoint_.resize(2 * ne_);
        neighbend_.resize(nv_);
        int64_t maxweight = 0;
        for (int k = 0; k < ne_; k++) {
            const auto &e = edges_[k];
            if (e.u < 0 || e.v < 0 || e.u >= nv_ || e.v >= nv_ || e.u == e.v) {
                throw std::invalid_argument("bad matching edge");
            }
            endpoint_[2 * k] = e.u;
            endpoint_[2 * k + 1] = e.v;
            neighbend_[e.u].push_back(2 * k + 1);
            neighbend_[e.v].push_back(2 * k);
            maxweight = std::max(maxweight, e.w);
        }
        mate_.assign(nv_, -1);
        label_.assign(2 * nv_, 0);
        labelend_.assign(2 * nv_, -1);
        inblossom_.resize(nv_);
        std::iota(inblossom_.begin(), inblossom_.end(), 0);
        blossomparent_.assign(2 * nv_, -1);
        childs_.assign(2 * nv_, {});
        endps_.assign(2 * nv_, {});
        base_.assign(2 * nv_, -1);
        std::iota(base_.begin(), base_.begin() + nv_, 0);
        bestedge_.assign(2 * nv_, -1);
        bestedges_.assign(2 * nv_, {});
        has_bestedges_.assign(2 * nv_, 0);
        // Free blossom slots, used as a stack: the highest slot goes first.
        for (int b = nv_; b < 2 * nv_; b++) unused_.push_back(b);
        dual_.assign(2 * nv_, 0);
        std::fill(dual_.begin(), dual_.begin() + nv_, maxweight);
        allow_.assign(ne_, 0);
        if (warm_start && maxcard_) greedy_start();
    }

    std::vector<int> solve(MatchingDuals *duals) {
        for (int stage = 0; stage < nv_; stage++) {
            std::fill(label_.begin(), label_.end(), 0);
            std::fill(bestedge_.begin(), bestedge_.end(), -1);
            for (int b = nv_; b < 2 * nv_; b++) {
                bestedges_[b].clear();
                has_bestedges_[b] = 0;
            }
            std::fill(allow_.begin(), allow_.end(), 0);
            queue_.clear();

            for (int v = 0; v < nv_; v++) {
                if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(v, 1, -1);
            }

            bool augmented = false;
            while (true) {
                while (!queue_.empty() && !augmented) {
                    int v = queue_.back();
                    queue_.pop_back();
                    for (int p : neighbend_[v]) {
                        int k = p / 2;
                        int w = endpoint_[p];
                        if (inblossom_[v] == inblossom_[w]) continue;
                        int64_t kslack = 0;
                        if (!allow_[k]) {
                            kslack = slack(k);
                            if (kslack <= 0) allow_[k] = 1;
                        }
                        if (allow_[k]) {
                            if (label_[inblossom_[w]] == 0) {
                                assign_label(w, 2, p ^ 1);
                            } else if (label_[inblossom_[w]] == 1) {
                                int base = scan_blossom(v, w);
                                if (base >= 0) {
                                    add_blossom(base, k);
                                } else {
                                    augment_matching(k);
                                    augmented = true;
                                    break;
                                }
                            } else if (label_[w] == 0) {
                                label_[w] = 2;
                                labelend_[w] = p ^ 1;
                            }
                        } else if (label_[inblossom_[w]] == 1) {
                            int b = inblossom_[v];
                            if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) bestedge_[b] = k;
                        } else if (label_[w] == 0) {
                            if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) bestedge_[w] = k;
                        }
                    }
                }
                if (augmented) break;

                // Dual adjustment.
                int deltatype = -1;
                int64_t delta = 0;
                int deltaedge = -1, deltablossom = -1;
                if (!maxcard_) {
                    deltatype = 1;
                    delta = *std::min_element(dual_.begin(), dual_.begin() + nv_);
                }
                for (int v = 0; v < nv_; v++) {
                    if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
                        int64_t d = slack(bestedge_[v]);
                        if (deltatype == -1 || d < delta) {
                            delta = d;
                            deltatype = 2;
                            deltaedge = bestedge_[v];
                        }
                    }
                }
                for (int b = 0; b < 2 * nv_; b++) {
                    if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
                        int64_t kslack = slack(bestedge_[b]);
                        int64_t d = kslack / 2;
                        if (deltatype == -1 || d < delta) {
                            delta = d;
                            deltatype = 3;
                            deltaedge = bestedge_[b];
                        }
                    }
                }
                for (int b = nv_; b < 2 * nv_; b++) {
                    if (base_[b] >= 0 && blossomparent_[b] == -1 && label_[b] == 2 &&
                        (deltatype == -1 || dual_[b] < delta)) {
                        delta = dual_[b];
                        deltatype = 4;
                        deltablossom = b;
                    }
                }
                if (deltatype == -1) {
                    deltatype = 1;
                    delta = std::max<int64_t>(0, *std::min_element(dual_.begin(), dual_.begin() + nv_));
                }

                for (int v = 0; v < nv_; v++) {
                    int l = label_[inblossom_[v]];
                    if (l == 1) {
                        dual_[v] -= delta;
                    } else if (l == 2) {
                        dual_[v] += delta;
                    }
                }
                for (int b = nv_; b < 2 * nv_; b++) {
                    if (base_[b] >= 0 && blossomparent_[b] == -1) {
                        if (label_[b] == 1) {
                            dual_[b] += delta;
                        } else if (label_[b] == 2) {
                            dual_[b] -= delta;
                        }
                    }
                }

                if (deltatype == 1) {
                    break;
                } else if (deltatype == 2) {
                    allow_[deltaedge] = 1;
                    int i = edges_[deltaedge].u, j = edges_[deltaedge].v;
                    if (label_[inblossom_[i]] == 0) std::swap(i, j);
                    queue_.push_back(i);
                } else if (deltatype == 3) {
                    allow_[deltaedge] = 1;
                    queue_.push_back(edges_[deltaedge].u);
                } else {
                    expand_blossom(deltablossom, false);
                }
            }

            if (!augmented) break;

            for (int b = nv_; b < 2 * nv_; b++) {
                if (blossomparent_[b] == -1 && base_[b] >= 0 && label_[b] == 1 && dual_[b] == 0) {
                    expand_blossom(b, true);
                }
            }
        }

        if (duals) {
            duals->num_vertices = nv_;
            duals->dual = dual_;
            duals->parent = blossomparent_;
            duals->base = base_;
        }
        std::vector<int> out(nv_, -1);
        for (int v = 0; v < nv_; v++) {
            if (mate_[v] >= 0) out[v] = endpoint_[mate_[v]];
        }
        return out;
    }

   private:
    // Vertex duals at the largest incident weight keep every edge feasible;
    // edges tight at both ends are then matched greedily. Without a
    // cardinality objective the free-vertex duals must stay equal, so this
    // is only valid in max-cardinality mode.
    void greedy_start() {
        for (int k = 0; k < ne_; k++) {
            dual_[edges_[k].u] = std::numeric_limits<int64_t>::min();
            dual_[edges_[k].v] = std::numeric_limits<int64_t>::min();
        }
        int64_t maxweight = 0;
        for (int k = 0; k < ne_; k++) {
            dual_[edges_[k].u] = std::max(dual_[edges_[k].u], edges_[k].w);
            dual_[edges_[k].v] = std::max(dual_[edges_[k].v], edges_[k].w);
            maxweight = std::max(maxweight, edges_[k].w);
        }
        // All vertex duals must share one parity, or S-S slacks can be odd
        // and the halved dual step stops being an integer.
        for (int v = 0; v < nv_; v++) {
            if (dual_[v] == std::numeric_limits<int64_t>::min()) {
                dual_[v] = maxweight;
            } else if ((dual_[v] ^ maxweight) & 1) {
                dual_[v]++;
            }
        }
        for (int v = 0; v < nv_; v++) {
            if (mate_[v] != -1) continue;
            for (int p : neighbend_[v]) {
                int u = endpoint_[p];
                if (mate_[u] == -1 && slack(p / 2) == 0) {
                    mate_[v] = p;
                    mate_[u] = p ^ 1;
                    break;
                }
            }
        }
    }

    int64_t slack(int k) const {
        const auto &e = edges_[k];
        return dual_[e.u] + dual_[e.v] - 2 * e.w;
    }

    void leaves(int b, std::vector<int> &out) const {
        if (b < nv_) {
            out.push_back(b);
            return;
        }
        for (int t : childs_[b]) leaves(t, out);
    }

    static int wrap(int j, int n) { return ((j % n) + n) % n; }

    void assign_label(int w, int t, int p) {
        while (true) {
            int b = inblossom_[w];
            label_[w] = label_[b] = t;
            labelend_[w] = labelend_[b] = p;
            bestedge_[w] = bestedge_[b] = -1;
            if (t == 1) {
                leaves(b, queue_);
                return;
            }
            // T label: the mate of the base becomes S.
            int base = base_[b];
            int mp = mate_[base];
            w = endpoint_[mp];
            t = 1;
            p = mp ^ 1;
        }
    }

    int scan_blossom(int v, int w) {
        std::vector<int> path;
        int base = -1;
        while (v != -1 || w != -1) {
            int b = inblossom_[v];
            if (label_[b] & 4) {
                base = base_[b];
                break;
            }
            path.push_back(b);
            label_[b] = 5;
            if (labelend_[b] == -1) {
                v = -1;
            } else {
                v = endpoint_[labelend_[b]];
                b = inblossom_[v];
                v = endpoint_[labelend_[b]];
            }
            if (w != -1) std::swap(v, w);
        }
        for (int b : path) label_[b] = 1;
        return base;
    }

    void add_blossom(int base, int k) {
        int v = edges_[k].u, w = edges_[k].v;
        int bb = inblossom_[base], bv = inblossom_[v], bw = inblossom_[w];
        int b = unused_.back();
        unused_.pop_back();
        base_[b] = base;
        blossomparent_[b] = -1;
        blossomparent_[bb] = b;
        auto &path = childs_[b];
        auto &endps = endps_[b];
        path.clear();
        endps.clear();
        while (bv != bb) {
            blossomparent_[bv] = b;
            path.push_back(bv);
            endps.push_back(labelend_[bv]);
            v = endpoint_[labelend_[bv]];
            bv = inblossom_[v];
        }
        path.push_back(bb);
        std::reverse(path.begin(), path.end());
        std::reverse(endps.begin(), endps.end());
        endps.push_back(2 * k);
        while (bw != bb) {
            blossomparent_[bw] = b;
            path.push_back(bw);
            endps.push_back(labelend_[bw] ^ 1);
            w = endpoint_[labelend_[bw]];
            bw = inblossom_[w];
        }
        label_[b] = 1;
        labelend_[b] = labelend_[bb];
        dual_[b] = 0;

        std::vector<int> lv;
        leaves(b, lv);
        for (int x : lv) {
            if (label_[inblossom_[x]] == 2) queue_.push_back(x);
            inblossom_[x] = b;
        }

        std::vector<int> bestedgeto(2 * nv_, -1);
        for (int sub : path) {
            auto consider = [&](int kk) {
                int i = edges_[kk].u, j = edges_[kk].v;
                if (inblossom_[j] == b) std::swap(i, j);
                int bj = inblossom_[j];
                if (bj != b && label_[bj] == 1 && (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj]))) {
                    bestedgeto[bj] = kk;
                }
            };
            if (!has_bestedges_[sub]) {
                std::vector<int> sl;
                leaves(sub, sl);
                for (int x : sl) {
                    for (int p : neighbend_[x]) consider(p / 2);
                }
            } else {
                for (int kk : bestedges_[sub]) consider(kk);
            }
            bestedges_[sub].clear();
            has_bestedges_[sub] = 0;
            bestedge_[sub] = -1;
        }
        auto &be = bestedges_[b];
        be.clear();
        for (int kk : bestedgeto) {
            if (kk != -1) be.push_back(kk);
        }
        has_bestedges_[b] = 1;
        bestedge_[b] = -1;
        for (int kk : be) {
            if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) bestedge_[b] = kk;
        }
    }

    void expand_blossom(int b, bool endstage) {
        for (int s : childs_[b]) {
            blossomparent_[s] = -1;
            if (s < nv_) {
                inblossom_[s] = s;
            } else if (endstage && dual_[s] == 0) {
                expand_blossom(s, endstage);
            } else {
                std::vector<int> lv;
                leaves(s, lv);
                for (int x : lv) inblossom_[x] = s;
            }
        }
        if (!endstage && label_[b] == 2) {
            const auto &ch = childs_[b];
            const auto &ep = endps_[b];
            const int len = static_cast<int>(ch.size());
            int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
            int j = static_cast<int>(std::find(ch.begin(), ch.end(), entrychild) - ch.begin());
            int jstep, endptrick;
            if (j & 1) {
                j -= len;
                jstep = 1;
                endptrick = 0;
            } else {
                jstep = -1;
                endptrick = 1;
            }
            int p = labelend_[b];
            while (j != 0) {
                label_[endpoint_[p ^ 1]] = 0;
                label_[endpoint_[ep[wrap(j - endptrick, len)] ^ endptrick ^ 1]] = 0;
                assign_label(endpoint_[p ^ 1], 2, p);
                allow_[ep[wrap(j - endptrick, len)] / 2] = 1;
                j += jstep;
                p = ep[wrap(j - endptrick, len)] ^ endptrick;
                allow_[p / 2] = 1;
                j += jstep;
            }
            int bv = ch[wrap(j, len)];
            label_[endpoint_[p ^ 1]] = label_[bv] = 2;
            labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
            bestedge_[bv] = -1;
            j += jstep;
            while (ch[wrap(j, len)] != entrychild) {
                bv = ch[wrap(j, len)];
                if (label_[bv] == 1) {
                    j += jstep;
                    continue;
                }
                std::vector<int> lv;
                leaves(bv, lv);
                int found = -1;
                for (int x : lv) {
                    if (label_[x] != 0) {
                        found = x;
                        break;
                    }
                }
                if (found >= 0) {
                    label_[found] = 0;
                    label_[endpoint_[mate_[base_[bv]]]] = 0;
                    assign_label(found, 2, labelend_[found]);
                }
                j += jstep;
            }
        }
        label_[b] = labelend_[b] = -1;
        childs_[b].clear();
        endps_[b].clear();
        base_[b] = -1;
        bestedges_[b].clear();
        has_bestedges_[b] = 0;
        bestedge_[b] = -1;
        unused_.push_back(b);
    }

    void augment_blossom(int b, int v) {
        int t = v;
        while (blossomparent_[t] != b) t = blossomparent_[t];
        if (t >= nv_) augment_blossom(t, v);
        auto &ch = childs_[b];
        auto &ep = endps_[b];
        const int len = static_cast<int>(ch.size());
        int i = static_cast<int>(std::find(ch.begin(), ch.end(), t) - ch.begin());
        int j = i;
        int jstep, endptrick;
        if (i & 1) {
            j -= len;
            jstep = 1;
            endptrick = 0;
        } else {
            jstep = -1;
            endptrick = 1;
        }
        while (j != 0) {
            j += jstep;
            t = ch[wrap(j, len)];
            int p = ep[wrap(j - endptrick, len)] ^ endptrick;
            if (t >= nv_) augment_blossom(t, endpoint_[p]);
            j += jstep;
            t = ch[wrap(j, len)];
            if (t >= nv_) augment_blossom(t, endpoint_[p ^ 1]);
            mate_[endpoint_[p]] = p ^ 1;
            mate_[endpoint_[p ^ 1]] = p;
        }
        std::rotate(ch.begin(), ch.begin() + i, ch.end());
        std::rotate(ep.begin(), ep.begin() + i, ep.end());
        base_[b] = base_[ch[0]];
    }

    void augment_matching(int k) {
        const std::pair<int, int> sides[2] = {{edges_[k].u, 2 * k + 1}, {edges_[k].v, 2 * k}};
        for (auto [s, p] : sides) {
            while (true) {
                int bs = inblossom_[s];
                if (bs >= nv_) augment_blossom(bs, s);
                mate_[s] = p;
                if (labelend_[bs] == -1) break;
                int t = endpoint_[labelend_[bs]];
                int bt = inblossom_[t];
                s = endpoint_[labelend_[bt]];
                int j = endpoint_[labelend_[bt] ^ 1];
                if (bt >= nv_) augment_blossom(bt, j);
                mate_[j] = labelend_[bt];
                p = labelend_[bt] ^ 1;
            }
        }
    }

    int nv_, ne_;
    std::span<const WeightedEdge> edges_;
    bool maxcard_;
    std::vector<int> endpoint_;
    std::vector<std::vector<int>> neighbend_;
    std::vector<int> mate_, label_, labelend_, inblossom_, blossomparent_, base_, bestedge_, unused_;
    std::vector<std::vector<int>> childs_, endps_, bestedges_;
    std::vector<char> has_bestedges_;
    std::vector<int64_t> dual_;
    std::vector<char> allow_;
    std::vector<int> queue_;
};

}  // namespace

std::vector<int> max_weight_matching(int num_vertices, std::span<const WeightedEdge> edges, bool max_cardinality,
                                     MatchingDuals *duals, bool warm_start) {
    if (num_vertices < 0) throw std::invalid_argument("negative vertex count");
    if (num_vertices == 0) {
        if (duals) *duals = MatchingDuals{};
        return {};
    }
    return Matcher(num_vertices, edges, max_cardinality, warm_start).solve(duals);
}

namespace {

// Blossoms containing v, outermost first.
std::vector<int> blossom_chain(const MatchingDuals &duals, int v) {
    std::vector<int> chain;
    for (int b = duals.parent[v]; b != -1; b = duals.parent[b]) chain.push_back(b);
    std::reverse(chain.begin(), chain.end());
    return chain;
}

}  // namespace

PerfectMatching min_weight_perfect_matching(const DistanceTable &dist, int neighbors) {
    const int n = static_cast<int>(dist.n);
    if (n % 2) throw std::invalid_argument("perfect matching needs an even number of nodes");
    PerfectMatching out;
    if (n == 0) return out;

    uint32_t maxd = 0;
    for (uint32_t v : dist.d) maxd = std::max(maxd, v);
    const int64_t top = static_cast<int64_t>(maxd) + 1;
    auto weight = [&](int i, int j) { return top - static_cast<int64_t>(dist.at(i, j)); };

    std::vector<char> in_graph(static_cast<size_t>(n) * n, 0);
    std::vector<WeightedEdge> edges;
    auto add = [&](int i, int j) {
        if (i > j) std::swap(i, j);
        char &flag = in_graph[static_cast<size_t>(i) * n + j];
        if (flag) return;
        flag = 1;
        edges.push_back({i, j, weight(i, j)});
    };

    const bool sparse = neighbors > 0 && neighbors < n - 1;
    if (sparse) {
        // The `neighbors` nearest nodes of each node, ties to lower index.
        std::vector<uint32_t> count(maxd + 2);
        for (int i = 0; i < n; i++) {
            std::fill(count.begin(), count.end(), 0);
            for (int j = 0; j < n; j++) {
                if (j != i) count[dist.at(i, j)]++;
            }
            uint32_t radius = 0, below = 0;
            while (below + count[radius] < static_cast<uint32_t>(neighbors)) below += count[radius++];
            uint32_t at_radius = static_cast<uint32_t>(neighbors) - below;
            for (int j = 0; j < n; j++) {
                if (j == i) continue;
                uint32_t d = dist.at(i, j);
                if (d < radius) {
                    add(i, j);
                } else if (d == radius && at_radius > 0) {
                    add(i, j);
                    at_radius--;
                }
            }
        }
        std::sort(edges.begin(), edges.end(),
                  [](const WeightedEdge &a, const WeightedEdge &b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
    } else {
        for (int i = 0; i < n; i++) {
            for (int j = i + 1; j < n; j++) add(i, j);
        }
    }

    std::vector<int> mate;
    while (true) {
        out.rounds++;
        MatchingDuals duals;
        mate = max_weight_matching(n, edges, true, &duals, true);
        bool perfect = std::find(mate.begin(), mate.end(), -1) == mate.end();
        if (!perfect) {
            if (edges.size() == static_cast<size_t>(n) * (n - 1) / 2) {
                throw std::logic_error("complete graph without a perfect matching");
            }
            for (int i = 0; i < n; i++) {
                for (int j = i + 1; j < n; j++) add(i, j);
            }
            out.complete_graph = true;
            continue;
        }
        if (edges.size() == static_cast<size_t>(n) * (n - 1) / 2) break;

        // Dual feasibility on every absent pair certifies optimality on the
        // complete graph. Blossom duals are nonnegative, so a pair whose
        // vertex terms alone are feasible needs no blossom lookup.
        std::vector<std::vector<int>> chains(n);
        for (int v = 0; v < n; v++) {
            if (duals.parent[v] != -1) chains[v] = blossom_chain(duals, v);
        }
        size_t added = 0;
        for (int i = 0; i < n; i++) {
            for (int j = i + 1; j < n; j++) {
                int64_t s = duals.dual[i] + duals.dual[j] - 2 * weight(i, j);
                if (s >= 0 || in_graph[static_cast<size_t>(i) * n + j]) continue;
                const auto &ci = chains[i], &cj = chains[j];
                for (size_t t = 0; t < ci.size() && t < cj.size() && ci[t] == cj[t]; t++) s += 2 * duals.dual[ci[t]];
                if (s < 0) {
                    add(i, j);
                    added++;
                }
            }
        }
        if (added == 0) break;
    }
    out.complete_graph = out.complete_graph || !sparse;
    out.mate = mate;
    for (int i = 0; i < n; i++) {
        if (mate[i] > i) out.weight += dist.at(i, mate[i]);
    }
    return out;
}

}  // namespace tcsim
