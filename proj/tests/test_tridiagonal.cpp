#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sshchain/errors.hpp"
#include "sshchain/tridiagonal.hpp"
#include "support.hpp"

using namespace sshchain;

TEST_CASE("assemble_chain layouts") {
    // homogeneous SSH N=1, delta=0: size 3, offdiagonal (1/2, 1/2)
    TridiagonalHamiltonian H = assemble_chain({0.5}, {0.5}, 0.0, 0.0, false);
    CHECK(H.size() == 3);
    CHECK(H.offdiagonal[0] == 0.5);
    CHECK(H.offdiagonal[1] == 0.5);

    // Krawtchouk N=2, p=0.5: offdiagonal (1, sqrt(0.5), sqrt(0.5), 1)
    double s = std::sqrt(0.5);
    TridiagonalHamiltonian K = assemble_chain({1.0, s}, {s, 1.0}, 0.0, 0.0, false);
    CHECK(K.size() == 5);
    CHECK(K.offdiagonal == std::vector<double>{1.0, s, s, 1.0});

    // mu variant: diagonal alternates mu+, mu- and ends with mu+
    TridiagonalHamiltonian M = assemble_chain({0.6, 0.6}, {0.4, 0.4}, 0.3, -0.2, false);
    CHECK(M.diagonal == std::vector<double>{0.3, -0.2, 0.3, -0.2, 0.3});

    // truncated mode drops the last site; final off-diagonal is t+_{N-1}
    TridiagonalHamiltonian T = assemble_chain({0.6, 0.7}, {0.4, 0.0}, 0.0, 0.0, true);
    CHECK(T.size() == 4);
    CHECK(T.offdiagonal == std::vector<double>{0.6, 0.4, 0.7});

    // zero coupling rejected in standard mode
    CHECK_THROWS_AS(assemble_chain({0.6, 0.7}, {0.0, 0.4}, 0.0, 0.0, false), std::domain_error);
}

TEST_CASE("oracle on tiny matrices") {
    TridiagonalHamiltonian one{{0.0}, {}};
    CHECK(std::fabs(eig_oracle_values(one)[0]) <= 1e-12);

    TridiagonalHamiltonian two{{0.0, 0.0}, {0.7}};
    auto v2 = eig_oracle_values(two);
    CHECK(v2[0] == doctest::Approx(-0.7).epsilon(1e-13));
    CHECK(v2[1] == doctest::Approx(0.7).epsilon(1e-13));

    // size 3, offdiagonals 1/2: roots of x^3 - x/2
    TridiagonalHamiltonian three{{0.0, 0.0, 0.0}, {0.5, 0.5}};
    auto v3 = eig_oracle_values(three);
    double r = 1.0 / std::sqrt(2.0);
    CHECK(v3[0] == doctest::Approx(-r).epsilon(1e-12));
    CHECK(std::fabs(v3[1]) <= 1e-12);
    CHECK(v3[2] == doctest::Approx(r).epsilon(1e-12));
}

TEST_CASE("oracle agrees with the dense Jacobi reference on random matrices") {
    testsupport::Rng rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        int n = rng.uniform_int(1, 12);
        std::vector<double> diag(n), off(std::max(n - 1, 0));
        for (double& d : diag) d = rng.uniform(-2.0, 2.0);
        for (double& e : off) e = rng.uniform(0.1, 2.0);
        TridiagonalHamiltonian H{diag, off};
        auto fast = eig_oracle_values(H, 1e-13 * std::max(1.0, H.inf_norm()));
        auto ref = testsupport::jacobi_eigenvalues(testsupport::dense_tridiagonal(diag, off));
        for (int i = 0; i < n; ++i) CHECK(fast[i] == doctest::Approx(ref[i]).epsilon(1e-10));
    }
}

TEST_CASE("Sturm count is self-consistent with the computed spectrum") {
    testsupport::Rng rng(17);
    std::vector<double> diag(15), off(14);
    for (double& d : diag) d = rng.uniform(-1.0, 1.0);
    for (double& e : off) e = rng.uniform(0.05, 1.5);
    TridiagonalHamiltonian H{diag, off};
    auto values = eig_oracle_values(H);
    for (int trial = 0; trial < 1000; ++trial) {
        double shift = rng.uniform(-4.0, 4.0);
        int expected = 0;
        bool near_eigenvalue = false;
        for (double v : values) {
            if (std::fabs(v - shift) < 1e-9) near_eigenvalue = true;
            if (v < shift) ++expected;
        }
        if (near_eigenvalue) continue; // count is ambiguous at rounding resolution
        CHECK(sturm_count(H, shift) == expected);
    }
}

TEST_CASE("zero-diagonal spectra are negation symmetric") {
    testsupport::Rng rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        int n = rng.uniform_int(2, 20);
        std::vector<double> off(n - 1);
        for (double& e : off) e = rng.uniform(0.1, 2.0);
        TridiagonalHamiltonian H{std::vector<double>(n, 0.0), off};
        double tol = 1e-12 * std::max(1.0, H.inf_norm());
        auto v = eig_oracle_values(H, tol);
        for (int i = 0; i < n; ++i) CHECK(std::fabs(v[i] + v[n - 1 - i]) <= 2.0 * tol);
    }
}

TEST_CASE("oracle reproduces the homogeneous SSH closed-form spectrum") {
    for (int n_cells : {1, 10, 100, 200}) {
        double delta = 0.5;
        double tp = 0.5 * (1.0 + delta), tm = 0.5 * (1.0 - delta);
        TridiagonalHamiltonian H =
            assemble_chain(std::vector<double>(n_cells, tp), std::vector<double>(n_cells, tm), 0.0, 0.0, false);
        auto got = eig_oracle_values(H);

        std::vector<double> expected{0.0};
        for (int k = 1; k <= n_cells; ++k) {
            double c = std::cos(k * std::numbers::pi / (n_cells + 1));
            double x = std::sqrt(0.5 * (1.0 - delta * delta) * c + 0.5 * (1.0 + delta * delta));
            expected.push_back(x);
            expected.push_back(-x);
        }
        std::sort(expected.begin(), expected.end());
        for (std::size_t i = 0; i < expected.size(); ++i)
            CHECK(std::fabs(got[i] - expected[i]) <= 1e-11);
    }
}

TEST_CASE("eigenvectors from inverse iteration") {
    testsupport::Rng rng(29);
    std::vector<double> diag(25), off(24);
    for (double& d : diag) d = rng.uniform(-1.0, 1.0);
    for (double& e : off) e = rng.uniform(0.1, 1.5);
    TridiagonalHamiltonian H{diag, off};
    EigenSystem sys = eig_oracle(H);
    CHECK(sys.residual_bound <= 1e-11);
    for (const auto& v : sys.eigenvectors) {
        long double nrm = 0.0L;
        for (double c : v) nrm += static_cast<long double>(c) * c;
        CHECK(static_cast<double>(nrm) == doctest::Approx(1.0).epsilon(1e-12));
    }
    // orthogonality across the full basis
    for (std::size_t a = 0; a < sys.eigenvectors.size(); ++a)
        for (std::size_t b = a + 1; b < sys.eigenvectors.size(); ++b) {
            long double dot = 0.0L;
            for (std::size_t i = 0; i < sys.eigenvectors[a].size(); ++i)
                dot += static_cast<long double>(sys.eigenvectors[a][i]) * sys.eigenvectors[b][i];
            CHECK(std::fabs(static_cast<double>(dot)) <= 1e-9);
        }
}

TEST_CASE("residual rejects degenerate input") {
    TridiagonalHamiltonian H{{0.0, 0.0}, {0.5}};
    CHECK_THROWS_AS(residual(H, 0.0, {1.0}), std::invalid_argument);       // dimension mismatch
    CHECK_THROWS_AS(residual(H, 0.0, {0.0, 0.0}), std::invalid_argument);  // zero vector
    EigenSystem sys = eig_oracle(H);
    CHECK(residual(H, sys.eigenvalues[0], sys.eigenvectors[0]) <= 1e-12);
}
