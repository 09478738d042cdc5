#include <gtest/gtest.h>

#include "tcsim/decode.h"
#include "tcsim/rng.h"

namespace tcsim {
namespace {

ErrorConfig flips_only(const Lattice &lat, std::initializer_list<uint32_t> faces) {
    ErrorConfig c(lat.num_faces());
    for (uint32_t f : faces) c.flips.flip(f);
    return c;
}

BitVector plaquette(const Lattice &lat, CellCoord c, int a, int b) {
    auto step = [&](CellCoord x, int ax) {
        int v[3] = {x.i, x.j, x.k};
        v[ax]++;
        return lat.normalize({v[0], v[1], v[2]});
    };
    BitVector chain(lat.num_faces());
    chain.flip(lat.face_index({c, Axis(a)}));
    chain.flip(lat.face_index({step(c, a), Axis(b)}));
    chain.flip(lat.face_index({step(c, b), Axis(a)}));
    chain.flip(lat.face_index({c, Axis(b)}));
    return chain;
}

BitVector ring(const Lattice &lat, int axis, int u, int v) {
    BitVector chain(lat.num_faces());
    for (int t = 0; t < lat.size(); t++) {
        int c[3];
        c[axis] = t;
        c[(axis + 1) % 3] = u;
        c[(axis + 2) % 3] = v;
        chain.flip(lat.face_index({{c[0], c[1], c[2]}, Axis(axis)}));
    }
    return chain;
}

TEST(Decoder, EverySingleFlipIsCorrected) {
    Lattice lat(3);
    for (uint32_t f = 0; f < lat.num_faces(); f++) {
        DecodeTrace trace;
        DecodeResult r = decode_trial(flips_only(lat, {f}), lat, {}, &trace);
        EXPECT_EQ(r.defect_count, 2u);
        EXPECT_FALSE(r.failed) << "face " << f;
        EXPECT_EQ(trace.matching_weight, 1);
        EXPECT_EQ(trace.correction.ones(), std::vector<uint32_t>{f});
        EXPECT_FALSE(trace.residual.any());
    }
}

TEST(Decoder, RingsHaveTheirWindingClass) {
    Lattice lat(4);
    for (int a = 0; a < 3; a++) {
        BitVector chain = ring(lat, a, 1, 2);
        EXPECT_FALSE(cell_parities(lat, chain).any());
        HomologyClass cls = winding_parity(lat, chain);
        HomologyClass expect;
        expect.w[a] = 1;
        EXPECT_EQ(cls, expect);

        ErrorConfig c(lat.num_faces());
        c.flips = chain;
        DecodeResult r = decode_trial(c, lat);
        EXPECT_EQ(r.defect_count, 0u);
        EXPECT_TRUE(r.failed);
        EXPECT_EQ(r.cls, expect);
    }
    EXPECT_EQ(winding_parity(lat, ring(lat, 2, 0, 0)).str(), "(0,0,1)");
}

TEST(Decoder, PlaquettesAreTrivial) {
    Lattice lat(4);
    Rng rng = derive_rng(3, 0);
    BitVector base = ring(lat, 0, 2, 3) ^ ring(lat, 2, 1, 1);
    HomologyClass cls = winding_parity(lat, base);
    for (int rep = 0; rep < 200; rep++) {
        CellCoord c = lat.cell_at(static_cast<uint32_t>(rng() % lat.num_cells()));
        int a = rng() % 3, b = (a + 1 + rng() % 2) % 3;
        BitVector p = plaquette(lat, c, std::min(a, b), std::max(a, b));
        EXPECT_TRUE(winding_parity(lat, p).trivial());
        base ^= p;
        EXPECT_EQ(winding_parity(lat, base), cls);
    }
}

TEST(Decoder, ChainsWithBoundaryHaveNoClass) {
    Lattice lat(3);
    BitVector chain(lat.num_faces());
    chain.flip(0);
    EXPECT_THROW(winding_parity(lat, chain), std::invalid_argument);
}

TEST(Decoder, LostFacesMergeCells) {
    Lattice lat(3);
    BitVector lost = plaquette(lat, {0, 0, 0}, 0, 1);
    SupercellPartition part = build_supercells(lat, lost);
    EXPECT_EQ(part.num_groups(), lat.num_cells() - 3);
    const uint32_t g = part.group_of[0];
    EXPECT_EQ(part.members[g].size(), 4u);
    for (uint32_t c : part.members[g]) EXPECT_EQ(part.group_of[c], g);
    EXPECT_EQ(part.members[g].front(), 0u);

    // A flip inside the supercell is invisible; one on its boundary is not.
    BitVector inner(lat.num_faces());
    inner.flip(lat.face_index({{0, 0, 0}, Axis::X}));
    SupercellPartition p2 = part;
    EXPECT_TRUE(extract_syndrome(lat, inner, p2).empty());
}

TEST(Decoder, LostFacesCostNothing) {
    Lattice lat(8);
    BitVector lost(lat.num_faces());
    for (int i = 0; i < 5; i++) lost.set(lat.face_index({{i, 0, 0}, Axis::X}), true);
    SupercellPartition part = build_supercells(lat, lost);
    BitVector chain(lat.num_faces());
    chain.flip(lat.face_index({{0, 0, 0}, Axis::Y}));
    chain.flip(lat.face_index({{5, 0, 0}, Axis::Y}));
    auto groups = extract_syndrome(lat, chain, part);
    ASSERT_EQ(groups.size(), 2u);
    // Across the lost run the two defects are two faces apart, not three.
    DistanceTable t = defect_distances(lat, part, lost, groups);
    EXPECT_EQ(t.at(0, 1), 2u);
    BitVector none(lat.num_faces());
    SupercellPartition plain = build_supercells(lat, none);
    auto g2 = extract_syndrome(lat, chain, plain);
    EXPECT_EQ(defect_distances(lat, plain, none, g2).at(0, 1), 3u);
}

TEST(Decoder, WitnessPathsRealiseDistances) {
    Lattice lat(5);
    for (int rep = 0; rep < 40; rep++) {
        Rng rng = derive_rng(9, rep);
        ErrorConfig c = phenomenological_config(lat, 0.04, 0.08, rng);
        BitVector chain = c.flips ^ c.gauge;
        SupercellPartition part = build_supercells(lat, c.lost);
        auto groups = extract_syndrome(lat, chain, part);
        if (groups.size() < 2) continue;
        DistanceTable t = defect_distances(lat, part, c.lost, groups);
        for (size_t i = 0; i + 1 < groups.size(); i++) {
            auto path = witness_path(lat, part, c.lost, groups[i], groups[i + 1]);
            uint32_t cost = 0;
            BitVector p(lat.num_faces());
            for (uint32_t f : path) {
                cost += !c.lost[f];
                p.flip(f);
            }
            EXPECT_EQ(cost, t.at(i, i + 1));
            // The path's boundary, per group, is exactly the two endpoints.
            SupercellPartition q = part;
            auto ends = extract_syndrome(lat, p, q);
            std::vector<uint32_t> expect{groups[i], groups[i + 1]};
            std::sort(expect.begin(), expect.end());
            if (cost > 0) {
                EXPECT_EQ(ends, expect);
            }
        }
    }
}

TEST(Decoder, TraceIsConsistent) {
    Lattice lat(5);
    for (int rep = 0; rep < 200; rep++) {
        Rng rng = derive_rng(11, rep);
        ErrorConfig c = phenomenological_config(lat, 0.03 + 0.001 * (rep % 20), 0.1 * (rep % 3), rng);
        DecodeTrace trace;
        DecodeResult r = decode_trial(c, lat, {}, &trace);
        EXPECT_EQ(r.defect_count % 2, 0u);
        EXPECT_EQ(r.defect_count, trace.syndrome.size());
        EXPECT_EQ(r.num_groups, trace.partition.num_groups());
        EXPECT_FALSE(cell_parities(lat, trace.residual).any());
        EXPECT_EQ(r.cls, winding_parity(lat, trace.residual));
        EXPECT_EQ(r.failed, !r.cls.trivial());

        // Matching weight is the optimum over the defect distance table.
        DistanceTable t = defect_distances(lat, trace.partition, c.lost, trace.syndrome);
        EXPECT_EQ(trace.matching_weight, min_weight_perfect_matching(t, 0).weight);

        // The complete-graph solver may break ties differently; the optimum is the same.
        DecodeTrace complete;
        decode_trial(c, lat, {0}, &complete);
        EXPECT_EQ(complete.matching_weight, trace.matching_weight);

        DecodeTrace again;
        DecodeResult r2 = decode_trial(c, lat, {}, &again);
        EXPECT_EQ(r2.cls, r.cls);
        EXPECT_EQ(again.correction, trace.correction);
    }
}

TEST(Decoder, SizeMismatchIsRejected) {
    Lattice lat(3);
    ErrorConfig c(10);
    EXPECT_THROW(decode_trial(c, lat), std::invalid_argument);
}

TEST(Decoder, ErrorFreeTrialSucceeds) {
    Lattice lat(2);
    ErrorConfig c(lat.num_faces());
    DecodeResult r = decode_trial(c, lat);
    EXPECT_FALSE(r.failed);
    EXPECT_EQ(r.defect_count, 0u);
}

}  // namespace
}  // namespace tcsim
