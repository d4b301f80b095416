#include "doctest.h"
#include "mipt/bits.hpp"
#include "mipt/gf2.hpp"
#include "mipt/rng.hpp"

using namespace mipt;

namespace {

// Field-arithmetic reference elimination, one byte per entry.
std::size_t naive_rank(std::vector<std::vector<int>> m) {
    if (m.empty()) return 0;
    const std::size_t rows = m.size(), cols = m[0].size();
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rank;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[rank]);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r != rank && m[r][c]) {
                for (std::size_t cc = 0; cc < cols; ++cc) m[r][cc] ^= m[rank][cc];
            }
        }
        ++rank;
    }
    return rank;
}

}  // namespace

TEST_SUITE("bits_gf2") {

TEST_CASE("identity matrix has full rank") {
    for (std::size_t k : {1u, 7u, 64u, 65u, 130u}) {
        BitMatrix m(k, k);
        for (std::size_t i = 0; i < k; ++i) m.set(i, i);
        CHECK(gf2_rank(m) == k);
    }
}

TEST_CASE("zero matrix has rank zero") {
    BitMatrix m(17, 93);
    CHECK(gf2_rank(m) == 0);
}

TEST_CASE("random matrices match the naive reference") {
    RandomStream rng(12345);
    for (int rep = 0; rep < 40; ++rep) {
        const std::size_t rows = 1 + rng.uniform_index(80);
        const std::size_t cols = 1 + rng.uniform_index(80);
        BitMatrix m(rows, cols);
        std::vector<std::vector<int>> ref(rows, std::vector<int>(cols, 0));
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < cols; ++c) {
                if (rng.bit()) {
                    m.set(r, c);
                    ref[r][c] = 1;
                }
            }
        }
        const BitMatrix copy = m;
        CHECK(gf2_rank(m) == naive_rank(ref));
        CHECK(m.data == copy.data);  // input untouched
    }
}

TEST_CASE("rank-deficient construction") {
    // duplicate rows and XOR combinations
    RandomStream rng(999);
    BitMatrix m(8, 64);
    for (std::size_t c = 0; c < 64; ++c) {
        if (rng.bit()) m.set(0, c);
        if (rng.bit()) m.set(1, c);
    }
    for (std::size_t c = 0; c < 64; ++c) {
        if (m.get(0, c) != m.get(1, c)) m.set(2, c);  // row2 = row0 ^ row1
        if (m.get(0, c)) m.set(3, c);                 // row3 = row0
    }
    CHECK(gf2_rank(m) <= 2);
}

TEST_CASE("exclusive prefix parity") {
    CHECK(exclusive_prefix_parity(0) == 0);
    // bit i of result = parity of bits below i
    const word x = 0b1011;
    const word e = exclusive_prefix_parity(x);
    int par = 0;
    for (int i = 0; i < 64; ++i) {
        CHECK(((e >> i) & 1) == static_cast<word>(par));
        par ^= (x >> i) & 1;
    }
}

TEST_CASE("lowest set bit search") {
    std::vector<word> w(3, 0);
    CHECK(lowest_set_bit_from(w, 0) == bit_npos);
    set_bit(w, 70);
    set_bit(w, 130);
    CHECK(lowest_set_bit_from(w, 0) == 70);
    CHECK(lowest_set_bit_from(w, 70) == 70);
    CHECK(lowest_set_bit_from(w, 71) == 130);
    CHECK(lowest_set_bit_from(w, 131) == bit_npos);
}

}  // TEST_SUITE
