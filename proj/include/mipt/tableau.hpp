// Bit-packed stabilizer tableau (Aaronson-Gottesman destabilizer/stabilizer
// form) for Clifford dynamics with projective Z measurements.
//
// Layout: one packed bit column per qubit, running over the 2n generator rows
// (rows 0..n-1 destabilizers, n..2n-1 stabilizers). A two-qubit gate touches
// only the four planes of the two qubits involved, updating 64 generator rows
// per word; measurement multiplies every anticommuting row by the pivot row in
// one masked pass per qubit column, tracking the i-power of the Pauli products
// in a two-bit counter per row. Phases are +/-1 only, which is closed under
// Clifford conjugation and Z measurement.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mipt/bits.hpp"
#include "mipt/clifford2.hpp"
#include "mipt/rng.hpp"

namespace mipt {

// Contiguous region of qubits, wrapping periodically.
struct CutSpec {
    std::size_t region_start = 0;
    std::size_t region_len = 0;
};

class StabilizerTableau {
  public:
    explicit StabilizerTableau(std::size_t n_qubits);

    std::size_t n_qubits() const { return n_; }

    void apply(const TwoQubitClifford& gate, std::size_t i, std::size_t j);
    int measure_z(std::size_t q, RandomStream& rng);
    // Same state update and random-stream consumption as measure_z, but skips
    // evaluating the outcome when it is deterministic (the projector acts
    // trivially then). For measurement-rate driving where outcomes are unused.
    void collapse_z(std::size_t q, RandomStream& rng);
    int entanglement_entropy(const CutSpec& cut) const;

    bool x_bit(std::size_t row, std::size_t q) const { return get_bit(x_col(q), row); }
    bool z_bit(std::size_t row, std::size_t q) const { return get_bit(z_col(q), row); }
    bool phase_bit(std::size_t row) const { return get_bit({phase_.data(), words_}, row); }

    // Commutation relations and GF(2) full rank; error text on failure.
    std::optional<std::string> validate() const;

    // Signed Pauli string of one generator row, e.g. "+ZZIX".
    std::string row_string(std::size_t row) const;
    std::string to_string() const;

  private:
    std::span<word> x_col(std::size_t q) { return {x_.data() + q * words_, words_}; }
    std::span<word> z_col(std::size_t q) { return {z_.data() + q * words_, words_}; }
    std::span<const word> x_col(std::size_t q) const { return {x_.data() + q * words_, words_}; }
    std::span<const word> z_col(std::size_t q) const { return {z_.data() + q * words_, words_}; }

    int measure_random(std::size_t q, std::size_t pivot, RandomStream& rng);
    int measure_deterministic(std::size_t q) const;

    std::size_t n_;
    std::size_t words_;  // words per 2n-row column
    std::vector<word> x_, z_, phase_;
    std::vector<word> rmask_, lo_, hi_;  // measurement scratch
};

// Spec-facing operations.
StabilizerTableau new_product_state(std::size_t n_qubits);
void apply_two_qubit_clifford(StabilizerTableau& state, const TwoQubitClifford& gate,
                              std::size_t i, std::size_t j);
int measure_z(StabilizerTableau& state, std::size_t q, RandomStream& rng);
int entanglement_entropy(const StabilizerTableau& state, const CutSpec& cut);

}  // namespace mipt
