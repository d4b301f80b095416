#include "mipt/tableau.hpp"

#include <cassert>
#include <sstream>
#include <stdexcept>

#include "mipt/gf2.hpp"

namespace mipt {

namespace {

constexpr word bcast(bool b) { return b ? ~word{0} : word{0}; }

// i-power (mod 4) of the ordered product of the single-qubit Paulis selected
// by the row bitsets (xs, zs), ascending row order.
int ordered_product_ipower(std::span<const word> xs, std::span<const word> zs) {
    int quarter = 0;      // count of i factors from Hermitian Y factors
    bool cross = false;   // parity of sum_{j<l} z_j x_l
    bool zcarry = false;  // parity of z bits in earlier words
    bool xpar = false, zpar = false;
    for (std::size_t w = 0; w < xs.size(); ++w) {
        const word x = xs[w], z = zs[w];
        quarter += std::popcount(x & z);
        const word ez = exclusive_prefix_parity(z) ^ bcast(zcarry);
        cross ^= std::popcount(x & ez) & 1;
        zcarry ^= std::popcount(z) & 1;
        xpar ^= std::popcount(x) & 1;
        zpar ^= std::popcount(z) & 1;
    }
    int t = quarter + 2 * static_cast<int>(cross) - static_cast<int>(xpar && zpar);
    return ((t % 4) + 4) % 4;
}

}  // namespace

StabilizerTableau::StabilizerTableau(std::size_t n_qubits)
    : n_(n_qubits),
      words_(words_for_bits(2 * n_qubits)),
      x_(n_qubits * words_, 0),
      z_(n_qubits * words_, 0),
      phase_(words_, 0),
      rmask_(words_, 0),
      lo_(words_, 0),
      hi_(words_, 0) {
    if (n_ < 2) throw std::invalid_argument("stabilizer tableau needs at least 2 qubits");
    for (std::size_t q = 0; q < n_; ++q) {
        set_bit(x_col(q), q);        // destabilizer q: +X_q
        set_bit(z_col(q), n_ + q);   // stabilizer q:   +Z_q
    }
}

void StabilizerTableau::apply(const TwoQubitClifford& gate, std::size_t i, std::size_t j) {
    if (i >= n_ || j >= n_) throw std::out_of_range("qubit index out of range");
    if (i == j) throw std::invalid_argument("two-qubit gate needs distinct qubits");

    word* xi = x_.data() + i * words_;
    word* zi = z_.data() + i * words_;
    word* xj = x_.data() + j * words_;
    word* zj = z_.data() + j * words_;
    word* ph = phase_.data();

    // Broadcast masks: output plane r = XOR of input planes selected by row[r];
    // the sign flip is the gate's sign function, XORed monomial by monomial
    // (it is cubic in general, so all 15 terms are wired in).
    word m[4][4], t[16];
    for (int r = 0; r < 4; ++r) {
        for (int k = 0; k < 4; ++k) m[r][k] = bcast((gate.row[r] >> k) & 1);
    }
    for (int k = 1; k < 16; ++k) t[k] = bcast((gate.anf >> k) & 1);

    for (std::size_t w = 0; w < words_; ++w) {
        const word a = xi[w], b = zi[w], c = xj[w], d = zj[w];
        const word ab = a & b, cd = c & d;
        ph[w] ^= (a & t[1]) ^ (b & t[2]) ^ (ab & t[3]) ^ (c & t[4]) ^ ((a & c) & t[5]) ^
                 ((b & c) & t[6]) ^ ((ab & c) & t[7]) ^ (d & t[8]) ^ ((a & d) & t[9]) ^
                 ((b & d) & t[10]) ^ ((ab & d) & t[11]) ^ (cd & t[12]) ^ ((a & cd) & t[13]) ^
                 ((b & cd) & t[14]) ^ ((ab & cd) & t[15]);
        xi[w] = (a & m[0][0]) ^ (b & m[0][1]) ^ (c & m[0][2]) ^ (d & m[0][3]);
        zi[w] = (a & m[1][0]) ^ (b & m[1][1]) ^ (c & m[1][2]) ^ (d & m[1][3]);
        xj[w] = (a & m[2][0]) ^ (b & m[2][1]) ^ (c & m[2][2]) ^ (d & m[2][3]);
        zj[w] = (a & m[3][0]) ^ (b & m[3][1]) ^ (c & m[3][2]) ^ (d & m[3][3]);
    }
}

int StabilizerTableau::measure_z(std::size_t q, RandomStream& rng) {
    if (q >= n_) throw std::out_of_range("qubit index out of range");
    const std::size_t pivot = lowest_set_bit_from(x_col(q), n_);
    if (pivot != bit_npos) return measure_random(q, pivot, rng);
    return measure_deterministic(q);
}

void StabilizerTableau::collapse_z(std::size_t q, RandomStream& rng) {
    if (q >= n_) throw std::out_of_range("qubit index out of range");
    const std::size_t pivot = lowest_set_bit_from(x_col(q), n_);
    if (pivot != bit_npos) measure_random(q, pivot, rng);
}

// Random outcome: every other row anticommuting with Z_q is multiplied by the
// pivot row, the pivot's destabilizer partner becomes the old pivot, and the
// pivot row becomes (-1)^m Z_q.
int StabilizerTableau::measure_random(std::size_t q, std::size_t pivot, RandomStream& rng) {
    const std::size_t partner = pivot - n_;
    word* rm = rmask_.data();
    word* lo = lo_.data();
    word* hi = hi_.data();
    {
        std::span<const word> xq = x_col(q);
        for (std::size_t w = 0; w < words_; ++w) {
            rm[w] = xq[w];
            lo[w] = 0;
            hi[w] = 0;
        }
    }
    clear_bit(rmask_, pivot);
    clear_bit(rmask_, partner);  // overwritten by the pivot copy below

    const std::size_t pw = pivot >> 6, dw = partner >> 6;
    const word pm = word{1} << (pivot & 63), dm = word{1} << (partner & 63);
    for (std::size_t u = 0; u < n_; ++u) {
        word* xu = x_.data() + u * words_;
        word* zu = z_.data() + u * words_;
        const bool a = (xu[pw] & pm) != 0;
        const bool b = (zu[pw] & pm) != 0;

        // row_r <- row_r * row_pivot for rows r in rmask; the two-bit counter
        // (hi, lo) accumulates the i-power of each row's Pauli product.
        if (a && !b) {
            for (std::size_t w = 0; w < words_; ++w) {
                const word x = xu[w], z = zu[w];
                const word inc = z & ~x, dec = z & x;
                hi[w] ^= (lo[w] & inc) ^ (dec & ~lo[w]);
                lo[w] ^= z;
                xu[w] = x ^ rm[w];
            }
        } else if (!a && b) {
            for (std::size_t w = 0; w < words_; ++w) {
                const word x = xu[w], z = zu[w];
                const word inc = x & z, dec = x & ~z;
                hi[w] ^= (lo[w] & inc) ^ (dec & ~lo[w]);
                lo[w] ^= x;
                zu[w] = z ^ rm[w];
            }
        } else if (a && b) {
            for (std::size_t w = 0; w < words_; ++w) {
                const word x = xu[w], z = zu[w];
                const word inc = x & ~z, dec = z & ~x;
                hi[w] ^= (lo[w] & inc) ^ (dec & ~lo[w]);
                lo[w] ^= x ^ z;
                xu[w] = x ^ rm[w];
                zu[w] = z ^ rm[w];
            }
        }

        // Pivot's partner takes the old pivot row; pivot row becomes Z_q.
        // Touch words only when a bit actually changes.
        const bool pa = (xu[dw] & dm) != 0;
        const bool pb = (zu[dw] & dm) != 0;
        if (pa != a) xu[dw] ^= dm;
        if (pb != b) zu[dw] ^= dm;
        if (a) xu[pw] &= ~pm;
        if (b != (u == q)) zu[pw] ^= pm;
    }

    const bool pivot_sign = get_bit({phase_.data(), words_}, pivot);
    const word sp = bcast(pivot_sign);
    for (std::size_t w = 0; w < words_; ++w) {
        assert((lo[w] & rm[w]) == 0 && "odd i-power in commuting row product");
        phase_[w] ^= (hi[w] ^ sp) & rm[w];
    }
    const int outcome = rng.bit() ? 1 : 0;
    assign_bit({phase_.data(), words_}, partner, pivot_sign);
    assign_bit({phase_.data(), words_}, pivot, outcome != 0);
    return outcome;
}

// Deterministic outcome: Z_q equals (up to sign) the product of the stabilizer
// rows whose destabilizer partners anticommute with Z_q. The state is not
// modified; only the product's sign is needed.
int StabilizerTableau::measure_deterministic(std::size_t q) const {
    const std::size_t dw = words_for_bits(n_);
    std::vector<word> sel(words_, 0);
    {
        std::span<const word> xq = x_col(q);
        // destabilizer rows with x bit at q, shifted up by n to select partners
        const std::size_t shift = n_ & 63, inv = 64 - shift;
        for (std::size_t w = 0; w < dw; ++w) {
            word v = xq[w];
            if (w * 64 + 63 >= n_) v &= (n_ & 63) ? ((word{1} << (n_ & 63)) - 1) : ~word{0};
            const std::size_t base = w + (n_ >> 6);
            if (shift == 0) {
                sel[base] |= v;
            } else {
                sel[base] |= v << shift;
                if (base + 1 < words_) sel[base + 1] |= v >> inv;
            }
        }
    }
    assert(any_set(sel) && "full-rank tableau must determine a deterministic outcome");

    std::vector<word> xs(words_), zs(words_);
    int ipower = 0;
    bool sign = false;
    for (std::size_t u = 0; u < n_; ++u) {
        std::span<const word> xu = x_col(u);
        std::span<const word> zu = z_col(u);
        bool active = false;
        for (std::size_t w = 0; w < words_; ++w) {
            xs[w] = xu[w] & sel[w];
            zs[w] = zu[w] & sel[w];
            active = active || xs[w] || zs[w];
        }
        if (!active) continue;
        ipower = (ipower + ordered_product_ipower(xs, zs)) % 4;
        assert(!parity(xs) && "x part of the stabilizer product must vanish");
        assert(parity(zs) == (u == q) && "z part of the stabilizer product must equal Z_q");
    }
    for (std::size_t w = 0; w < words_; ++w) sign ^= std::popcount(phase_[w] & sel[w]) & 1;
    assert(ipower % 2 == 0 && "stabilizer product must be Hermitian");
    return (sign ^ ((ipower >> 1) & 1)) ? 1 : 0;
}

int StabilizerTableau::entanglement_entropy(const CutSpec& cut) const {
    if (cut.region_len == 0 || cut.region_len >= n_ || cut.region_start >= n_) {
        throw std::invalid_argument("cut must select a nonempty strict subregion");
    }
    const std::size_t len = cut.region_len;
    BitMatrix m(n_, 2 * len);
    for (std::size_t k = 0; k < len; ++k) {
        const std::size_t qcol = (cut.region_start + k) % n_;
        std::span<const word> xq = x_col(qcol);
        std::span<const word> zq = z_col(qcol);
        for (std::size_t r = 0; r < n_; ++r) {
            if (get_bit(xq, n_ + r)) m.set(r, k);
            if (get_bit(zq, n_ + r)) m.set(r, len + k);
        }
    }
    return static_cast<int>(gf2_rank_inplace(m)) - static_cast<int>(len);
}

std::optional<std::string> StabilizerTableau::validate() const {
    // Row-major copy: row r -> (x | z) over 2n columns.
    BitMatrix m(2 * n_, 2 * n_);
    for (std::size_t q = 0; q < n_; ++q) {
        std::span<const word> xq = x_col(q);
        std::span<const word> zq = z_col(q);
        for (std::size_t r = 0; r < 2 * n_; ++r) {
            if (get_bit(xq, r)) m.set(r, q);
            if (get_bit(zq, r)) m.set(r, n_ + q);
        }
    }
    auto sym = [&](std::size_t r, std::size_t s) {
        // <a,b> = a_x . b_z + a_z . b_x, bitwise since the halves need not be
        // word-aligned.
        bool acc = false;
        std::span<const word> a = m.row(r), b = m.row(s);
        for (std::size_t q = 0; q < n_; ++q) {
            acc ^= (get_bit(a, q) && get_bit(b, n_ + q));
            acc ^= (get_bit(a, n_ + q) && get_bit(b, q));
        }
        return acc;
    };
    for (std::size_t r = 0; r < 2 * n_; ++r) {
        for (std::size_t s = r + 1; s < 2 * n_; ++s) {
            const bool want = (s == r + n_);
            if (sym(r, s) != want) {
                std::ostringstream os;
                os << "commutation failure between rows " << r << " and " << s;
                return os.str();
            }
        }
    }
    if (gf2_rank_inplace(m) != 2 * n_) return "combined tableau matrix is rank-deficient";
    return std::nullopt;
}

std::string StabilizerTableau::row_string(std::size_t row) const {
    std::string s;
    s += phase_bit(row) ? '-' : '+';
    for (std::size_t q = 0; q < n_; ++q) {
        const int code = (x_bit(row, q) ? 1 : 0) | (z_bit(row, q) ? 2 : 0);
        s += "IXZY"[code];
    }
    return s;
}

std::string StabilizerTableau::to_string() const {
    std::ostringstream os;
    for (std::size_t r = 0; r < 2 * n_; ++r) {
        os << (r < n_ ? "d" : "s") << (r < n_ ? r : r - n_) << " " << row_string(r) << "\n";
    }
    return os.str();
}

StabilizerTableau new_product_state(std::size_t n_qubits) { return StabilizerTableau(n_qubits); }

void apply_two_qubit_clifford(StabilizerTableau& state, const TwoQubitClifford& gate,
                              std::size_t i, std::size_t j) {
    state.apply(gate, i, j);
}

int measure_z(StabilizerTableau& state, std::size_t q, RandomStream& rng) {
    return state.measure_z(q, rng);
}

int entanglement_entropy(const StabilizerTableau& state, const CutSpec& cut) {
    return state.entanglement_entropy(cut);
}

}  // namespace mipt
