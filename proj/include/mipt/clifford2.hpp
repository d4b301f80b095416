// Two-qubit Clifford group elements in the binary-symplectic picture.
//
// A gate is stored as the images of the four Pauli generators X0, Z0, X1, Z1
// under conjugation: a 4x4 symplectic matrix over GF(2) (one column per image)
// plus one sign bit per image. Local Pauli vectors are packed into 4 bits in
// the order (x0, z0, x1, z1). The full sign function v -> sign(U P(v) U+) is
// quadratic over GF(2); its coefficients are derived on construction so the
// tableau engine can apply gates to 64 generator rows per word operation.
#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "mipt/rng.hpp"

namespace mipt {

struct TwoQubitClifford {
    std::array<std::uint8_t, 4> col;  // col[k] = image vector of generator k
    std::uint8_t signs = 0;           // bit k = sign of image of generator k
    std::uint16_t sign_table = 0;     // bit v = sign of U P(v) U+
    std::uint16_t anf = 0;            // sign_table as XOR of monomials in the v bits
    std::array<std::uint8_t, 4> row;  // row[r] = input mask for output component r

    // v' = M v for a packed 4-bit Pauli vector.
    std::uint8_t image_vector(std::uint8_t v) const;
    // sign of U P(v) U+ relative to P(Mv).
    bool image_sign(std::uint8_t v) const { return (sign_table >> v) & 1; }

    bool preserves_symplectic_form() const;

    TwoQubitClifford then(const TwoQubitClifford& second) const;  // second * this
    TwoQubitClifford inverse() const;

    bool operator==(const TwoQubitClifford& o) const { return col == o.col && signs == o.signs; }

    // Validates symplecticity and derives the sign form from the image data.
    static TwoQubitClifford from_images(const std::array<std::uint8_t, 4>& image_vectors,
                                        std::uint8_t image_signs);

    static TwoQubitClifford identity();
    static TwoQubitClifford cnot();      // control qubit 0, target qubit 1
    static TwoQubitClifford swap();
    static TwoQubitClifford cz();
    static TwoQubitClifford h_first();   // H x I
    static TwoQubitClifford h_second();  // I x H
    static TwoQubitClifford s_first();   // S x I
    static TwoQubitClifford s_second();
    static TwoQubitClifford x_first();
    static TwoQubitClifford z_first();
};

// Symplectic inner product of two packed 4-bit Pauli vectors.
bool symplectic_product4(std::uint8_t u, std::uint8_t v);

// All 720 elements of Sp(4,2), packed as 4x4-bit column nibbles; fixed order.
std::span<const std::uint16_t> sp4_elements();

// Uniform over the 11,520-element two-qubit Clifford group modulo phase:
// a uniform Sp(4,2) element combined with a uniform 4-bit sign pattern.
// Consumes exactly two bounded draws from the stream.
TwoQubitClifford sample_uniform_two_qubit_clifford(RandomStream& rng);

}  // namespace mipt
