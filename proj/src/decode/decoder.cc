#include <stdexcept>

#include "tcsim/decode.h"

namespace tcsim {

std::string HomologyClass::str() const {
    return "(" + std::to_string(w[0]) + "," + std::to_string(w[1]) + "," + std::to_string(w[2]) + ")";
}

namespace {

HomologyClass seam_parity(const Lattice &lat, const BitVector &chain) {
    HomologyClass cls;
    const int last = lat.size() - 1;
    for (uint32_t f : chain.ones()) {
        FaceCoord fc = lat.face_at(f);
        const int coord[3] = {fc.cell.i, fc.cell.j, fc.cell.k};
        int a = static_cast<int>(fc.axis);
        if (coord[a] == last) cls.w[a] ^= 1;
    }
    return cls;
}

// Closes `chain` inside every supercell: for each group, walk a spanning
// tree of its lost faces from the leaves up, flipping the tree face above
// any odd cell. Requires every group to have even parity.
void close_over_lost_faces(const Lattice &lat, const BitVector &lost, BitVector &chain) {
    const uint32_t n = lat.num_cells();
    BitVector par = cell_parities(lat, chain);
    std::vector<uint32_t> parent_face(n, UINT32_MAX);
    std::vector<char> seen(n, 0);
    std::vector<uint32_t> order;
    for (uint32_t root = 0; root < n; root++) {
        if (seen[root]) continue;
        seen[root] = 1;
        size_t head = order.size();
        order.push_back(root);
        while (head < order.size()) {
            uint32_t c = order[head++];
            for (uint32_t f : lat.faces_of_cell(c)) {
                if (!lost[f]) continue;
                uint32_t o = lat.across(c, f);
                if (seen[o]) continue;
                seen[o] = 1;
                parent_face[o] = f;
                order.push_back(o);
            }
        }
    }
    for (size_t idx = order.size(); idx-- > 0;) {
        uint32_t c = order[idx];
        if (!par[c]) continue;
        uint32_t f = parent_face[c];
        if (f == UINT32_MAX) throw std::logic_error("odd supercell left after correction");
        chain.flip(f);
        par.flip(c);
        par.flip(lat.across(c, f));
    }
}

}  // namespace

HomologyClass winding_parity(const Lattice &lat, const BitVector &chain) {
    if (cell_parities(lat, chain).any()) throw std::invalid_argument("winding parity of a chain with boundary");
    return seam_parity(lat, chain);
}

DecodeResult decode_trial(const ErrorConfig &cfg, const Lattice &lat, const DecoderOptions &opts,
                          DecodeTrace *trace) {
    const uint32_t nf = lat.num_faces();
    if (cfg.flips.size() != nf || cfg.lost.size() != nf || cfg.gauge.size() != nf) {
        throw std::invalid_argument("error configuration does not match the lattice");
    }

    // The physical Z chain: sampled flips plus the unknown state of lost qubits.
    BitVector chain = cfg.flips;
    chain ^= cfg.gauge;

    SupercellPartition part = build_supercells(lat, cfg.lost);
    std::vector<uint32_t> syndrome = extract_syndrome(lat, chain, part);

    DecodeResult res;
    res.defect_count = static_cast<uint32_t>(syndrome.size());
    res.num_groups = static_cast<uint32_t>(part.num_groups());

    BitVector correction(nf);
    std::vector<std::pair<uint32_t, uint32_t>> pairs;
    int64_t weight = 0;
    if (!syndrome.empty()) {
        DistanceTable dist = defect_distances(lat, part, cfg.lost, syndrome);
        PerfectMatching pm = min_weight_perfect_matching(dist, opts.matching_neighbors);
        weight = pm.weight;
        std::vector<std::pair<size_t, size_t>> idx;
        for (size_t a = 0; a < syndrome.size(); a++) {
            size_t b = static_cast<size_t>(pm.mate[a]);
            if (b < a) continue;
            idx.emplace_back(a, b);
            pairs.emplace_back(syndrome[a], syndrome[b]);
        }
        auto paths = witness_paths(lat, part, cfg.lost, pairs);
        for (size_t k = 0; k < paths.size(); k++) {
            uint32_t cost = 0;
            for (uint32_t f : paths[k]) {
                if (cfg.lost[f]) continue;
                correction.flip(f);
                cost++;
            }
            if (cost != dist.at(idx[k].first, idx[k].second)) {
                throw std::logic_error("witness path length differs from the matched distance");
            }
        }
    }

    BitVector residual = chain;
    residual ^= correction;
    close_over_lost_faces(lat, cfg.lost, residual);
    if (cell_parities(lat, residual).any()) throw std::logic_error("residual chain has a boundary");

    res.cls = seam_parity(lat, residual);
    res.failed = !res.cls.trivial();

    if (trace) {
        trace->partition = std::move(part);
        trace->syndrome = std::move(syndrome);
        trace->matching = std::move(pairs);
        trace->matching_weight = weight;
        trace->correction = std::move(correction);
        trace->residual = std::move(residual);
    }
    return res;
}

}  // namespace tcsim
