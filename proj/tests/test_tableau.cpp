#include <cmath>

#include "dense_oracle.hpp"
#include "doctest.h"
#include "mipt/tableau.hpp"

using namespace mipt;
using mipt::testing::DenseState;

TEST_SUITE("tableau") {

TEST_CASE("product state construction") {
    CHECK_THROWS_AS(new_product_state(1), std::invalid_argument);

    auto t = new_product_state(8);
    CHECK_FALSE(t.validate().has_value());
    for (std::size_t q = 0; q < 8; ++q) {
        CHECK(t.row_string(8 + q)[0] == '+');
        CHECK(t.row_string(8 + q)[1 + q] == 'Z');
    }
    for (std::size_t start = 0; start < 8; ++start) {
        for (std::size_t len = 1; len < 8; ++len) {
            CHECK(entanglement_entropy(t, {start, len}) == 0);
        }
    }
}

TEST_CASE("z eigenstates measure deterministically") {
    auto t = new_product_state(4);
    RandomStream rng(1);
    for (std::size_t q = 0; q < 4; ++q) {
        CHECK(measure_z(t, q, rng) == 0);
    }
    CHECK_FALSE(t.validate().has_value());
}

TEST_CASE("bell pair: entropy, correlation, collapse") {
    auto t = new_product_state(2);
    t.apply(TwoQubitClifford::h_first(), 0, 1);
    t.apply(TwoQubitClifford::cnot(), 0, 1);
    CHECK(entanglement_entropy(t, {0, 1}) == 1);
    CHECK(entanglement_entropy(t, {1, 1}) == 1);

    RandomStream rng(77);
    const int m0 = measure_z(t, 0, rng);
    CHECK(entanglement_entropy(t, {0, 1}) == 0);
    const int m1 = measure_z(t, 1, rng);
    CHECK(m0 == m1);
    CHECK_FALSE(t.validate().has_value());
}

TEST_CASE("plus state measures half and half") {
    int ones = 0;
    constexpr int kShots = 10000;
    RandomStream rng(5150);
    for (int s = 0; s < kShots; ++s) {
        auto t = new_product_state(2);
        t.apply(TwoQubitClifford::h_first(), 0, 1);
        ones += measure_z(t, 0, rng);
    }
    // 3 sigma around p = 1/2
    const double sigma = std::sqrt(0.25 * kShots);
    CHECK(std::abs(ones - kShots / 2) < 3.0 * sigma);
}

TEST_CASE("gate errors") {
    auto t = new_product_state(4);
    RandomStream rng(3);
    const auto g = sample_uniform_two_qubit_clifford(rng);
    CHECK_THROWS_AS(t.apply(g, 0, 4), std::out_of_range);
    CHECK_THROWS_AS(t.apply(g, 2, 2), std::invalid_argument);
}

TEST_CASE("gate sequences agree with the dense oracle") {
    RandomStream gates(2024);
    RandomStream meas(99);
    for (int rep = 0; rep < 25; ++rep) {
        const std::size_t n = 4 + gates.uniform_index(5);  // 4..8 qubits
        StabilizerTableau t(n);
        DenseState dense(n);
        for (int layer = 0; layer < 12; ++layer) {
            const auto g = sample_uniform_two_qubit_clifford(gates);
            const std::size_t i = gates.uniform_index(n);
            std::size_t j = gates.uniform_index(n);
            while (j == i) j = gates.uniform_index(n);
            t.apply(g, i, j);
            dense.apply_gate(g, i, j);
        }
        REQUIRE_FALSE(t.validate().has_value());
        REQUIRE(dense.consistent_with(t));
        for (std::size_t start = 0; start < n; start += 2) {
            for (std::size_t len = 1; len < n; ++len) {
                const CutSpec cut{start, len};
                const double ds = dense.entropy_bits(cut);
                CHECK(std::abs(ds - std::round(ds)) < 1e-7);
                CHECK(entanglement_entropy(t, cut) == doctest::Approx(ds).epsilon(1e-6));
            }
        }
        (void)meas;
    }
}

TEST_CASE("hybrid dynamics agree with the dense oracle exactly") {
    // Gates, outcome probabilities, post-measurement states, entropies.
    RandomStream driver(31337);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t n = 3 + driver.uniform_index(6);  // 3..8 qubits
        StabilizerTableau t(n);
        DenseState dense(n);
        for (int step = 0; step < 30; ++step) {
            if (driver.u01() < 0.6) {
                const auto g = sample_uniform_two_qubit_clifford(driver);
                const std::size_t i = driver.uniform_index(n);
                std::size_t j = driver.uniform_index(n);
                while (j == i) j = driver.uniform_index(n);
                t.apply(g, i, j);
                dense.apply_gate(g, i, j);
            } else {
                const std::size_t q = driver.uniform_index(n);
                const double p1 = dense.prob_one(q);
                const bool random_branch = std::abs(p1 - 0.5) < 1e-9;
                CHECK((random_branch || p1 < 1e-9 || p1 > 1.0 - 1e-9));
                const int m = t.measure_z(q, driver);
                if (!random_branch) CHECK(m == (p1 > 0.5 ? 1 : 0));
                dense.project_z(q, m);
            }
            REQUIRE(dense.consistent_with(t));
        }
        REQUIRE_FALSE(t.validate().has_value());
        const CutSpec cut{0, n / 2};
        CHECK(entanglement_entropy(t, cut) == doctest::Approx(dense.entropy_bits(cut)).epsilon(1e-6));
    }
}

TEST_CASE("measurement changes the cut entropy by at most one bit") {
    RandomStream rng(5);
    StabilizerTableau t(10);
    const CutSpec cut{0, 5};
    for (int step = 0; step < 40; ++step) {
        const auto g = sample_uniform_two_qubit_clifford(rng);
        const std::size_t i = rng.uniform_index(10);
        std::size_t j = rng.uniform_index(10);
        while (j == i) j = rng.uniform_index(10);
        t.apply(g, i, j);
        const int before = t.entanglement_entropy(cut);
        const std::size_t q = rng.uniform_index(10);
        t.measure_z(q, rng);
        const int after = t.entanglement_entropy(cut);
        CHECK(std::abs(after - before) <= 1);
        CHECK(after >= 0);
    }
}

TEST_CASE("gates inside one region leave the cut entropy unchanged") {
    RandomStream rng(6);
    StabilizerTableau t(8);
    const CutSpec cut{0, 4};
    for (int step = 0; step < 30; ++step) {
        // entangle across the cut first
        t.apply(sample_uniform_two_qubit_clifford(rng), 3, 4);
        const int before = t.entanglement_entropy(cut);
        t.apply(sample_uniform_two_qubit_clifford(rng), 0, 2);  // inside A
        t.apply(sample_uniform_two_qubit_clifford(rng), 5, 7);  // inside B
        CHECK(t.entanglement_entropy(cut) == before);
    }
}

TEST_CASE("entropy is symmetric under complementation") {
    RandomStream rng(8);
    StabilizerTableau t(9);
    for (int step = 0; step < 25; ++step) {
        const std::size_t i = rng.uniform_index(9);
        std::size_t j = rng.uniform_index(9);
        while (j == i) j = rng.uniform_index(9);
        t.apply(sample_uniform_two_qubit_clifford(rng), i, j);
        if (step % 3 == 0) t.measure_z(rng.uniform_index(9), rng);
        for (std::size_t len = 1; len < 9; ++len) {
            const int sa = t.entanglement_entropy({2, len});
            const int sb = t.entanglement_entropy({(2 + len) % 9, 9 - len});
            CHECK(sa == sb);
            CHECK(sa <= static_cast<int>(std::min(len, 9 - len)));
            CHECK(sa >= 0);
        }
    }
}

TEST_CASE("collapse_z matches measure_z state-for-state") {
    for (std::uint64_t seed : {11u, 22u, 33u}) {
        RandomStream ra(seed), rb(seed);
        StabilizerTableau ta(12), tb(12);
        for (int step = 0; step < 60; ++step) {
            const auto g = sample_uniform_two_qubit_clifford(ra);
            const auto g2 = sample_uniform_two_qubit_clifford(rb);
            CHECK(g == g2);
            const std::size_t i = ra.uniform_index(12), j = (i + 1) % 12;
            rb.uniform_index(12);
            ta.apply(g, i, j);
            tb.apply(g2, i, j);
            const std::size_t q = ra.uniform_index(12);
            rb.uniform_index(12);
            ta.measure_z(q, ra);
            tb.collapse_z(q, rb);
        }
        for (std::size_t r = 0; r < 24; ++r) CHECK(ta.row_string(r) == tb.row_string(r));
    }
}

TEST_CASE("ascii dump round-trips the bell state") {
    auto t = new_product_state(2);
    t.apply(TwoQubitClifford::h_first(), 0, 1);
    t.apply(TwoQubitClifford::cnot(), 0, 1);
    const std::string s = t.to_string();
    CHECK(s.find("+XX") != std::string::npos);
    CHECK(s.find("+ZZ") != std::string::npos);
}

}  // TEST_SUITE
