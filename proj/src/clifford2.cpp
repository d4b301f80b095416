#include "mipt/clifford2.hpp"

#include <bit>
#include <cassert>
#include <stdexcept>
#include <vector>

namespace mipt {

namespace {

inline bool parity4(std::uint8_t v) { return std::popcount(v) & 1; }

// i-power from multiplying two single-qubit Hermitian Paulis a*b, each packed
// as (x, z) bits: sigma(a) sigma(b) = i^beta sigma(a^b). Indexed [a][b].
constexpr int kSiteBeta[4][4] = {
    // b:  I   X   Z   Y            (encoding: bit0 = x, bit1 = z)
    {0, 0, 0, 0},   // a = I
    {0, 0, -1, 1},  // a = X   (XZ = -iY, XY = +iZ)
    {0, 1, 0, -1},  // a = Z   (ZX = +iY, ZY = -iX)
    {0, -1, 1, 0},  // a = Y   (YX = -iZ, YZ = +iX)
};

// Two-qubit Hermitian Pauli with an explicit i-power: i^t * P(v).
struct PhasedPauli2 {
    std::uint8_t v = 0;
    int t = 0;  // mod 4

    PhasedPauli2 operator*(const PhasedPauli2& o) const {
        const int b0 = kSiteBeta[v & 3][o.v & 3];
        const int b1 = kSiteBeta[(v >> 2) & 3][(o.v >> 2) & 3];
        return {static_cast<std::uint8_t>(v ^ o.v), ((t + o.t + b0 + b1) % 4 + 4) % 4};
    }
};

// Hermitian-convention correction: P(v) = i^{x0 z0 + x1 z1} X0^x0 Z0^z0 X1^x1 Z1^z1.
inline int hermitian_offset(std::uint8_t v) {
    return ((v & 1) & ((v >> 1) & 1)) + (((v >> 2) & 1) & ((v >> 3) & 1));
}

}  // namespace

bool symplectic_product4(std::uint8_t u, std::uint8_t v) {
    const std::uint8_t swapped =
        static_cast<std::uint8_t>(((v & 0b0101) << 1) | ((v & 0b1010) >> 1));
    return parity4(u & swapped);
}

std::uint8_t TwoQubitClifford::image_vector(std::uint8_t v) const {
    std::uint8_t out = 0;
    for (int k = 0; k < 4; ++k) {
        if ((v >> k) & 1) out ^= col[k];
    }
    return out;
}

bool TwoQubitClifford::preserves_symplectic_form() const {
    for (int k = 0; k < 4; ++k) {
        for (int l = 0; l < 4; ++l) {
            const bool want = symplectic_product4(std::uint8_t{1} << k, std::uint8_t{1} << l);
            if (symplectic_product4(col[k], col[l]) != want) return false;
        }
    }
    return true;
}

TwoQubitClifford TwoQubitClifford::from_images(const std::array<std::uint8_t, 4>& image_vectors,
                                               std::uint8_t image_signs) {
    TwoQubitClifford g;
    g.col = image_vectors;
    g.signs = image_signs & 0xF;
    if (!g.preserves_symplectic_form()) {
        throw std::invalid_argument("two-qubit Clifford images do not preserve the symplectic form");
    }

    // Exact sign of U P(v) U+ for every v, by multiplying out the images.
    g.sign_table = 0;
    for (int v = 1; v < 16; ++v) {
        PhasedPauli2 acc{0, hermitian_offset(static_cast<std::uint8_t>(v))};
        int sign = 0;
        for (int k = 0; k < 4; ++k) {
            if ((v >> k) & 1) {
                acc = acc * PhasedPauli2{image_vectors[k], 0};
                sign ^= (image_signs >> k) & 1;
            }
        }
        if (acc.t & 1) throw std::logic_error("non-Hermitian image in Clifford construction");
        if (sign ^ ((acc.t >> 1) & 1)) g.sign_table |= std::uint16_t{1} << v;
    }

    // Moebius transform: bit m of anf = coefficient of the monomial over the
    // bits of m. The sign function is generally cubic in the Pauli bits.
    g.anf = g.sign_table;
    for (int b = 0; b < 4; ++b) {
        std::uint16_t next = g.anf;
        for (int m = 0; m < 16; ++m) {
            if (m & (1 << b)) {
                const bool parent = (g.anf >> (m ^ (1 << b))) & 1;
                if (parent) next ^= std::uint16_t{1} << m;
            }
        }
        g.anf = next;
    }
#ifndef NDEBUG
    for (int v = 0; v < 16; ++v) {
        bool eval = false;
        for (int m = 1; m < 16; ++m) {
            if (((g.anf >> m) & 1) && (v & m) == m) eval = !eval;
        }
        assert(eval == g.image_sign(static_cast<std::uint8_t>(v)));
    }
#endif

    for (int r = 0; r < 4; ++r) {
        std::uint8_t mask = 0;
        for (int k = 0; k < 4; ++k) mask |= static_cast<std::uint8_t>(((g.col[k] >> r) & 1) << k);
        g.row[r] = mask;
    }
    return g;
}

TwoQubitClifford TwoQubitClifford::then(const TwoQubitClifford& second) const {
    std::array<std::uint8_t, 4> cols;
    std::uint8_t s = 0;
    for (int k = 0; k < 4; ++k) {
        cols[k] = second.image_vector(col[k]);
        const bool sk = ((signs >> k) & 1) ^ second.image_sign(col[k]);
        s |= static_cast<std::uint8_t>(sk) << k;
    }
    return from_images(cols, s);
}

TwoQubitClifford TwoQubitClifford::inverse() const {
    // M^{-1} = J M^T J for symplectic M.
    std::array<std::uint8_t, 4> inv_cols{};
    for (int k = 0; k < 4; ++k) {
        const int kp = k ^ 1;  // J swaps (x,z) within each qubit
        std::uint8_t c = 0;
        for (int r = 0; r < 4; ++r) {
            c |= static_cast<std::uint8_t>(((col[r ^ 1] >> kp) & 1) << r);
        }
        inv_cols[k] = c;
    }
    std::uint8_t s = 0;
    for (int k = 0; k < 4; ++k) s |= static_cast<std::uint8_t>(image_sign(inv_cols[k])) << k;
    return from_images(inv_cols, s);
}

// Packed vectors: X0 = 0b0001, Z0 = 0b0010, X1 = 0b0100, Z1 = 0b1000.
TwoQubitClifford TwoQubitClifford::identity() { return from_images({1, 2, 4, 8}, 0); }
TwoQubitClifford TwoQubitClifford::cnot() { return from_images({1 | 4, 2, 4, 2 | 8}, 0); }
TwoQubitClifford TwoQubitClifford::swap() { return from_images({4, 8, 1, 2}, 0); }
TwoQubitClifford TwoQubitClifford::cz() { return from_images({1 | 8, 2, 4 | 2, 8}, 0); }
TwoQubitClifford TwoQubitClifford::h_first() { return from_images({2, 1, 4, 8}, 0); }
TwoQubitClifford TwoQubitClifford::h_second() { return from_images({1, 2, 8, 4}, 0); }
TwoQubitClifford TwoQubitClifford::s_first() { return from_images({1 | 2, 2, 4, 8}, 0); }
TwoQubitClifford TwoQubitClifford::s_second() { return from_images({1, 2, 4 | 8, 8}, 0); }
TwoQubitClifford TwoQubitClifford::x_first() { return from_images({1, 2, 4, 8}, 0b0010); }
TwoQubitClifford TwoQubitClifford::z_first() { return from_images({1, 2, 4, 8}, 0b0001); }

namespace {

std::vector<std::uint16_t> build_sp4() {
    std::vector<std::uint16_t> out;
    out.reserve(720);
    for (std::uint8_t c0 = 1; c0 < 16; ++c0) {
        for (std::uint8_t c1 = 1; c1 < 16; ++c1) {
            if (!symplectic_product4(c0, c1)) continue;
            for (std::uint8_t c2 = 1; c2 < 16; ++c2) {
                if (symplectic_product4(c0, c2) || symplectic_product4(c1, c2)) continue;
                for (std::uint8_t c3 = 1; c3 < 16; ++c3) {
                    if (symplectic_product4(c0, c3) || symplectic_product4(c1, c3)) continue;
                    if (!symplectic_product4(c2, c3)) continue;
                    out.push_back(static_cast<std::uint16_t>(c0 | (c1 << 4) | (c2 << 8) | (c3 << 12)));
                }
            }
        }
    }
    if (out.size() != 720) throw std::logic_error("Sp(4,2) enumeration size mismatch");
    return out;
}

struct GateTable {
    std::vector<TwoQubitClifford> base;  // sign pattern zero
    GateTable() {
        for (std::uint16_t packed : build_sp4()) {
            const std::array<std::uint8_t, 4> cols = {
                static_cast<std::uint8_t>(packed & 0xF),
                static_cast<std::uint8_t>((packed >> 4) & 0xF),
                static_cast<std::uint8_t>((packed >> 8) & 0xF),
                static_cast<std::uint8_t>((packed >> 12) & 0xF),
            };
            base.push_back(TwoQubitClifford::from_images(cols, 0));
        }
    }
};

const GateTable& gate_table() {
    static const GateTable t;
    return t;
}

}  // namespace

std::span<const std::uint16_t> sp4_elements() {
    static const std::vector<std::uint16_t> elems = build_sp4();
    return elems;
}

TwoQubitClifford sample_uniform_two_qubit_clifford(RandomStream& rng) {
    const auto& table = gate_table().base;
    const std::size_t idx = rng.uniform_index(table.size());
    const std::uint8_t s = static_cast<std::uint8_t>(rng.uniform_index(16));
    TwoQubitClifford g = table[idx];
    // Flipping image signs toggles only the linear part of the sign function.
    g.signs = s;
    constexpr std::uint16_t kLinearMask[4] = {0xAAAA, 0xCCCC, 0xF0F0, 0xFF00};
    for (int k = 0; k < 4; ++k) {
        if ((s >> k) & 1) {
            g.sign_table ^= kLinearMask[k];
            g.anf ^= std::uint16_t{1} << (1 << k);
        }
    }
    return g;
}

}  // namespace mipt
