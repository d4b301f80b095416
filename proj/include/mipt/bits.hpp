// Packed-bit helpers shared by the GF(2) linear algebra and the tableau engine.
#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mipt {

using word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for_bits(std::size_t nbits) {
    return (nbits + kWordBits - 1) / kWordBits;
}

inline bool get_bit(std::span<const word> w, std::size_t i) {
    return (w[i >> 6] >> (i & 63)) & word{1};
}

inline void set_bit(std::span<word> w, std::size_t i) { w[i >> 6] |= word{1} << (i & 63); }

inline void clear_bit(std::span<word> w, std::size_t i) { w[i >> 6] &= ~(word{1} << (i & 63)); }

inline void assign_bit(std::span<word> w, std::size_t i, bool v) {
    const word mask = word{1} << (i & 63);
    w[i >> 6] = (w[i >> 6] & ~mask) | (v ? mask : word{0});
}

inline std::size_t popcount(std::span<const word> w) {
    std::size_t c = 0;
    for (word x : w) c += static_cast<std::size_t>(std::popcount(x));
    return c;
}

inline bool parity(std::span<const word> w) {
    word acc = 0;
    for (word x : w) acc ^= x;
    return std::popcount(acc) & 1;
}

inline bool any_set(std::span<const word> w) {
    for (word x : w) {
        if (x) return true;
    }
    return false;
}

// Index of the lowest set bit at position >= from, or npos if none.
inline constexpr std::size_t bit_npos = static_cast<std::size_t>(-1);

inline std::size_t lowest_set_bit_from(std::span<const word> w, std::size_t from) {
    std::size_t wi = from >> 6;
    if (wi >= w.size()) return bit_npos;
    word first = w[wi] & (~word{0} << (from & 63));
    if (first) return wi * kWordBits + static_cast<std::size_t>(std::countr_zero(first));
    for (++wi; wi < w.size(); ++wi) {
        if (w[wi]) return wi * kWordBits + static_cast<std::size_t>(std::countr_zero(w[wi]));
    }
    return bit_npos;
}

// Bit i of the result is the XOR of bits 0..i-1 of x (exclusive prefix parity).
inline word exclusive_prefix_parity(word x) {
    word s = x << 1;
    s ^= s << 1;
    s ^= s << 2;
    s ^= s << 4;
    s ^= s << 8;
    s ^= s << 16;
    s ^= s << 32;
    return s;
}

// Dense GF(2) matrix, rows packed least-significant-bit first.
struct BitMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t stride = 0;  // words per row
    std::vector<word> data;

    BitMatrix() = default;
    BitMatrix(std::size_t r, std::size_t c)
        : rows(r), cols(c), stride(words_for_bits(c)), data(r * stride, 0) {}

    std::span<word> row(std::size_t r) { return {data.data() + r * stride, stride}; }
    std::span<const word> row(std::size_t r) const { return {data.data() + r * stride, stride}; }

    bool get(std::size_t r, std::size_t c) const { return get_bit(row(r), c); }
    void set(std::size_t r, std::size_t c) { set_bit(row(r), c); }
};

}  // namespace mipt
