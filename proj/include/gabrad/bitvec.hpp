#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "gabrad/errors.hpp"

namespace gabrad {

/// Fixed-length bit vector packed into 64-bit words. Bit i lives in word
/// i/64 at position i%64, which serializes to LSB-first bytes. Unused tail
/// bits are kept zero so word-level XOR+popcount needs no masking.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t n_bits)
        : n_bits_(n_bits), words_((n_bits + 63) / 64, 0) {}

    std::size_t size() const { return n_bits_; }
    bool empty() const { return n_bits_ == 0; }

    void set(std::size_t i, bool value) {
        std::uint64_t mask = std::uint64_t{1} << (i % 64);
        if (value) words_[i / 64] |= mask;
        else words_[i / 64] &= ~mask;
    }
    bool get(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1; }

    std::span<const std::uint64_t> words() const { return words_; }

    std::size_t count() const {
        std::size_t c = 0;
        for (std::uint64_t w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    std::vector<std::uint8_t> to_bytes() const {
        std::vector<std::uint8_t> out((n_bits_ + 7) / 8);
        for (std::size_t j = 0; j < out.size(); ++j)
            out[j] = static_cast<std::uint8_t>(words_[j / 8] >> (8 * (j % 8)));
        return out;
    }

    static BitVec from_bytes(std::size_t n_bits, std::span<const std::uint8_t> bytes) {
        if (bytes.size() != (n_bits + 7) / 8)
            fail(Errc::length_mismatch, "bit vector byte count does not match bit length");
        BitVec v(n_bits);
        for (std::size_t j = 0; j < bytes.size(); ++j)
            v.words_[j / 8] |= static_cast<std::uint64_t>(bytes[j]) << (8 * (j % 8));
        // clear any gap bits encoded past n_bits
        if (n_bits % 64 != 0 && !v.words_.empty())
            v.words_.back() &= (std::uint64_t{1} << (n_bits % 64)) - 1;
        return v;
    }

    bool operator==(const BitVec& o) const = default;

private:
    std::size_t n_bits_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Number of differing bit positions; word-level XOR + popcount.
inline std::size_t hamming(const BitVec& a, const BitVec& b) {
    if (a.size() != b.size())
        fail(Errc::length_mismatch, "hamming: operands have different lengths");
    auto wa = a.words(), wb = b.words();
    std::size_t d = 0;
    for (std::size_t i = 0; i < wa.size(); ++i)
        d += static_cast<std::size_t>(std::popcount(wa[i] ^ wb[i]));
    return d;
}

} // namespace gabrad
