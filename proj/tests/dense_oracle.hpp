// Dense statevector reference for n <= 10 qubits, independent of the tableau
// engine. Gate unitaries are reconstructed from the Clifford's Pauli images
// alone, so agreement checks exercise the whole binary-symplectic pipeline.
#pragma once

#include <complex>
#include <vector>

#include "mipt/tableau.hpp"

namespace mipt::testing {

class DenseState {
  public:
    explicit DenseState(std::size_t n_qubits);  // |0...0>

    std::size_t n_qubits() const { return n_; }

    void apply_gate(const TwoQubitClifford& gate, std::size_t i, std::size_t j);

    // Probability of measuring 1 on qubit q.
    double prob_one(std::size_t q) const;
    // Projects onto the given outcome and renormalizes.
    void project_z(std::size_t q, int outcome);

    // Von Neumann entropy of the cut region in bits.
    double entropy_bits(const CutSpec& cut) const;

    // <psi| P |psi> for a signed Pauli string given as tableau row data.
    std::complex<double> expectation(const StabilizerTableau& t, std::size_t row) const;

    // True when every signed stabilizer row of the tableau stabilizes us.
    bool consistent_with(const StabilizerTableau& t, double tol = 1e-9) const;

  private:
    std::size_t n_;
    std::vector<std::complex<double>> amp_;
};

}  // namespace mipt::testing
