#include <immintrin.h>

#include <bit>

#include "tcsim/kernels.h"

namespace tcsim::kernels {
namespace {

inline uint64_t hsum_popcount(__m256i v) {
    return std::popcount(static_cast<uint64_t>(_mm256_extract_epi64(v, 0))) +
           std::popcount(static_cast<uint64_t>(_mm256_extract_epi64(v, 1))) +
           std::popcount(static_cast<uint64_t>(_mm256_extract_epi64(v, 2))) +
           std::popcount(static_cast<uint64_t>(_mm256_extract_epi64(v, 3)));
}

inline __m256i load(const uint64_t *p) {
    return _mm256_loadu_si256(reinterpret_cast<const __m256i *>(p));
}

void xor_words(uint64_t *dst, const uint64_t *src, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i v = _mm256_xor_si256(load(dst + i), load(src + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i *>(dst + i), v);
    }
    for (; i < n; i++) {
        dst[i] ^= src[i];
    }
}

uint64_t popcount_words(const uint64_t *a, size_t n) {
    uint64_t total = 0;
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        total += hsum_popcount(load(a + i));
    }
    for (; i < n; i++) {
        total += std::popcount(a[i]);
    }
    return total;
}

bool symplectic_parity(const uint64_t *x1, const uint64_t *z1, const uint64_t *x2,
                       const uint64_t *z2, size_t n) {
    __m256i acc = _mm256_setzero_si256();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i a = _mm256_and_si256(load(x1 + i), load(z2 + i));
        __m256i b = _mm256_and_si256(load(z1 + i), load(x2 + i));
        acc = _mm256_xor_si256(acc, _mm256_xor_si256(a, b));
    }
    uint64_t tail = 0;
    for (; i < n; i++) {
        tail ^= (x1[i] & z2[i]) ^ (z1[i] & x2[i]);
    }
    return (hsum_popcount(acc) + std::popcount(tail)) & 1;
}

unsigned pauli_product_phase(const uint64_t *x1, const uint64_t *z1, const uint64_t *x2,
                             const uint64_t *z2, size_t n) {
    int64_t total = 0;
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i ax1 = load(x1 + i), az1 = load(z1 + i), ax2 = load(x2 + i), az2 = load(z2 + i);
        __m256i a_x = _mm256_andnot_si256(az1, ax1);
        __m256i a_y = _mm256_and_si256(ax1, az1);
        __m256i a_z = _mm256_andnot_si256(ax1, az1);
        __m256i b_x = _mm256_andnot_si256(az2, ax2);
        __m256i b_y = _mm256_and_si256(ax2, az2);
        __m256i b_z = _mm256_andnot_si256(ax2, az2);
        __m256i plus = _mm256_or_si256(
            _mm256_or_si256(_mm256_and_si256(a_x, b_y), _mm256_and_si256(a_y, b_z)),
            _mm256_and_si256(a_z, b_x));
        __m256i minus = _mm256_or_si256(
            _mm256_or_si256(_mm256_and_si256(a_y, b_x), _mm256_and_si256(a_z, b_y)),
            _mm256_and_si256(a_x, b_z));
        total += static_cast<int64_t>(hsum_popcount(plus)) -
                 static_cast<int64_t>(hsum_popcount(minus));
    }
    for (; i < n; i++) {
        uint64_t a_x = x1[i] & ~z1[i], a_y = x1[i] & z1[i], a_z = ~x1[i] & z1[i];
        uint64_t b_x = x2[i] & ~z2[i], b_y = x2[i] & z2[i], b_z = ~x2[i] & z2[i];
        uint64_t plus = (a_x & b_y) | (a_y & b_z) | (a_z & b_x);
        uint64_t minus = (a_y & b_x) | (a_z & b_y) | (a_x & b_z);
        total += std::popcount(plus) - std::popcount(minus);
    }
    return static_cast<unsigned>(((total % 4) + 4) % 4);
}

void bfs_relax(const uint32_t *edges, size_t num_edges, const LaneMask *frontier, LaneMask *next) {
    auto *f = reinterpret_cast<const __m256i *>(frontier);
    auto *nx = reinterpret_cast<__m256i *>(next);
    for (size_t e = 0; e < num_edges; e++) {
        uint32_t u = edges[2 * e];
        uint32_t v = edges[2 * e + 1];
        __m256i fu = _mm256_load_si256(f + u);
        __m256i fv = _mm256_load_si256(f + v);
        _mm256_store_si256(nx + v, _mm256_or_si256(_mm256_load_si256(nx + v), fu));
        _mm256_store_si256(nx + u, _mm256_or_si256(_mm256_load_si256(nx + u), fv));
    }
}

bool bfs_settle(LaneMask *next, LaneMask *visited, LaneMask *frontier, size_t num_nodes) {
    auto *nx = reinterpret_cast<__m256i *>(next);
    auto *vis = reinterpret_cast<__m256i *>(visited);
    auto *fr = reinterpret_cast<__m256i *>(frontier);
    const __m256i zero = _mm256_setzero_si256();
    __m256i any = zero;
    for (size_t i = 0; i < num_nodes; i++) {
        __m256i n = _mm256_load_si256(nx + i);
        __m256i v = _mm256_load_si256(vis + i);
        __m256i fresh = _mm256_andnot_si256(v, n);
        _mm256_store_si256(vis + i, _mm256_or_si256(v, fresh));
        _mm256_store_si256(fr + i, fresh);
        _mm256_store_si256(nx + i, zero);
        any = _mm256_or_si256(any, fresh);
    }
    return !_mm256_testz_si256(any, any);
}

}  // namespace

const KernelTable &avx2_kernels_table() {
    static const KernelTable table{
        "avx2",    xor_words, popcount_words, symplectic_parity, pauli_product_phase,
        bfs_relax, bfs_settle,
    };
    return table;
}

}  // namespace tcsim::kernels
