#include "mipt/gf2.hpp"

#include <algorithm>

namespace mipt {

std::size_t gf2_rank_inplace(BitMatrix& m) {
    std::size_t rank = 0;
    for (std::size_t col = 0; col < m.cols && rank < m.rows; ++col) {
        const std::size_t wi = col >> 6;
        const word mask = word{1} << (col & 63);

        std::size_t pivot = bit_npos;
        for (std::size_t r = rank; r < m.rows; ++r) {
            if (m.row(r)[wi] & mask) {
                pivot = r;
                break;
            }
        }
        if (pivot == bit_npos) continue;

        if (pivot != rank) {
            word* a = m.data.data() + pivot * m.stride;
            word* b = m.data.data() + rank * m.stride;
            std::swap_ranges(a, a + m.stride, b);
        }
        const word* prow = m.data.data() + rank * m.stride;
        for (std::size_t r = rank + 1; r < m.rows; ++r) {
            word* row = m.data.data() + r * m.stride;
            if (row[wi] & mask) {
                for (std::size_t w = wi; w < m.stride; ++w) row[w] ^= prow[w];
            }
        }
        ++rank;
    }
    return rank;
}

std::size_t gf2_rank(const BitMatrix& m) {
    BitMatrix copy = m;
    return gf2_rank_inplace(copy);
}

}  // namespace mipt
