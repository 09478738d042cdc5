#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "tcsim/kernels.h"

namespace tcsim {

/// Dense bit vector over 64-bit words. Bits past size() are always zero.
class BitVector {
   public:
    BitVector() = default;
    explicit BitVector(size_t num_bits) : bits_(num_bits), words_((num_bits + 63) / 64, 0) {}

    size_t size() const { return bits_; }
    size_t num_words() const { return words_.size(); }
    uint64_t *data() { return words_.data(); }
    const uint64_t *data() const { return words_.data(); }

    bool operator[](size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    void set(size_t i, bool v) {
        uint64_t m = uint64_t{1} << (i & 63);
        if (v) {
            words_[i >> 6] |= m;
        } else {
            words_[i >> 6] &= ~m;
        }
    }
    void flip(size_t i) { words_[i >> 6] ^= uint64_t{1} << (i & 63); }
    void clear() { std::fill(words_.begin(), words_.end(), 0); }

    BitVector &operator^=(const BitVector &other) {
        kernels::active().xor_words(words_.data(), other.words_.data(), words_.size());
        return *this;
    }
    friend BitVector operator^(BitVector a, const BitVector &b) { return a ^= b; }

    size_t popcount() const { return kernels::active().popcount_words(words_.data(), words_.size()); }
    bool any() const {
        for (uint64_t w : words_) {
            if (w) return true;
        }
        return false;
    }

    /// Indices of set bits in increasing order.
    std::vector<uint32_t> ones() const {
        std::vector<uint32_t> out;
        for (size_t w = 0; w < words_.size(); w++) {
            uint64_t v = words_[w];
            while (v) {
                out.push_back(static_cast<uint32_t>(w * 64 + std::countr_zero(v)));
                v &= v - 1;
            }
        }
        return out;
    }

    /// Removes bit `i`, shifting higher bits down by one.
    void erase(size_t i) {
        BitVector out(bits_ - 1);
        for (size_t k = 0, j = 0; k < bits_; k++) {
            if (k != i) out.set(j++, (*this)[k]);
        }
        *this = std::move(out);
    }

    /// Appends a zero bit.
    void push_back_zero() {
        bits_++;
        if (words_.size() * 64 < bits_) words_.push_back(0);
    }

    bool operator==(const BitVector &other) const = default;

   private:
    size_t bits_ = 0;
    std::vector<uint64_t> words_;
};

}  // namespace tcsim
