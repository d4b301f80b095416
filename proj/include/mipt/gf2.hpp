// GF(2) rank via bit-packed Gaussian elimination.
#pragma once

#include <cstddef>

#include "mipt/bits.hpp"

namespace mipt {

// Destroys the row order of m (works in place on the caller's copy).
std::size_t gf2_rank_inplace(BitMatrix& m);

// Rank of the matrix; the input is not mutated.
std::size_t gf2_rank(const BitMatrix& m);

}  // namespace mipt
