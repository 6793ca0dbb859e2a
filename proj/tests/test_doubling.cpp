#include <doctest.h>

#include <cmath>

#include "sshchain/doubling.hpp"
#include "sshchain/errors.hpp"
#include "sshchain/models.hpp"
#include "sshchain/tridiagonal.hpp"
#include "support.hpp"

using namespace sshchain;

TEST_CASE("constraints hold for the shipped Chebyshev solution") {
    // delta = 0.4 closed-form solution; residuals are pure rounding
    Model ssh = chebyshev_model({5, 0.4, 0.0, 0.0});
    ConstraintReport rep = check_constraints(ssh.seq, 1e-14);
    CHECK(rep.pass);
    CHECK(rep.max_scaled_residual <= 1e-14);
}

TEST_CASE("constraints hold for the Krawtchouk solution and fail when perturbed") {
    Model kraw = krawtchouk_model({6, 0.3});
    ConstraintReport good = check_constraints(kraw.seq, 1e-14);
    CHECK(good.pass);

    QSequence perturbed = kraw.seq;
    perturbed.solution.tau0 = 1.01;
    ConstraintReport bad = check_constraints(perturbed, 1e-12);
    CHECK_FALSE(bad.pass);
    // the diagonal constraint residual equals the tau0 perturbation
    CHECK(bad.entries[bad.worst_index].diagonal_residual == doctest::Approx(0.01).epsilon(1e-9));
}

TEST_CASE("constraints reject zero couplings") {
    Model kraw = krawtchouk_model({4, 0.5});
    QSequence broken = kraw.seq;
    broken.solution.t_minus[1] = 0.0;
    CHECK_THROWS_AS(check_constraints(broken, 1e-12), std::domain_error);
}

TEST_CASE("eval_Q fixed low-order values") {
    Model kraw = krawtchouk_model({3, 0.4});
    testsupport::Rng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        double x = rng.uniform(-2.0, 2.0);
        CHECK(eval_Q(kraw.seq, 1, x) == doctest::Approx(x).epsilon(1e-15));          // Q_1 = x
        CHECK(eval_Q(kraw.seq, 0, x) == doctest::Approx(std::sqrt(0.4 * 3)).epsilon(1e-15)); // Q_0 = t+_0
    }
}

TEST_CASE("eval_Q matches the brute-force 3x3 eigenvector (SSH, delta = 0, N = 1)") {
    Model ssh = chebyshev_model({1, 0.0, 0.0, 0.0});
    double x = 1.0 / std::sqrt(2.0);
    // components frozen from the hand-solved 3x3 system with off-diagonals 1/2
    CHECK(eval_Q(ssh.seq, 0, x) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(eval_Q(ssh.seq, 1, x) == doctest::Approx(0.7071067811865476).epsilon(1e-14));
    CHECK(eval_Q(ssh.seq, 2, x) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("eval_Q enforces the Q_{2N} domain restriction for finite families") {
    Model kraw = krawtchouk_model({3, 0.4});
    const int top = 2 * kraw.seq.N();
    CHECK_THROWS_AS(eval_Q(kraw.seq, top, 0.123), std::domain_error); // pi_x off the grid
    CHECK_NOTHROW(eval_Q(kraw.seq, top, 0.0));                       // special root
    CHECK_NOTHROW(eval_Q(kraw.seq, top, 1.0));                       // eigenvalue: pi_x = lambda(0)
    CHECK_THROWS_AS(eval_Q(kraw.seq, top + 1, 0.0), std::out_of_range);

    // extendable Chebyshev family has no such restriction
    Model ssh = chebyshev_model({3, 0.2, 0.0, 0.0});
    CHECK_NOTHROW(eval_Q(ssh.seq, 6, 0.37));
}

TEST_CASE("eigenvalues: Krawtchouk closed spectrum") {
    Model kraw = krawtchouk_model({3, 0.5});
    std::vector<double> got = eigenvalues(kraw.seq);
    std::vector<double> expected{-std::sqrt(3.0), -std::sqrt(2.0), -1.0, 0.0, 1.0, std::sqrt(2.0), std::sqrt(3.0)};
    REQUIRE(got.size() == expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(expected[i]).epsilon(1e-13));
}

TEST_CASE("eigenvalues: homogeneous SSH N=1 and spectral symmetry") {
    Model ssh = chebyshev_model({1, 0.0, 0.0, 0.0});
    std::vector<double> got = eigenvalues(ssh.seq);
    double r = 1.0 / std::sqrt(2.0); // roots of x^3 - x/2
    REQUIRE(got.size() == 3);
    CHECK(got[0] == doctest::Approx(-r).epsilon(1e-14));
    CHECK(got[1] == 0.0);
    CHECK(got[2] == doctest::Approx(r).epsilon(1e-14));

    // mirror symmetry as a multiset for zero-diagonal models; zero present iff odd length
    for (int n_cells : {2, 5, 9}) {
        Model m = krawtchouk_model({n_cells, 0.35});
        std::vector<double> v = eigenvalues(m.seq);
        CHECK(static_cast<int>(v.size()) % 2 == 1);
        int zeros = 0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            CHECK(v[i] == doctest::Approx(-v[v.size() - 1 - i]).epsilon(1e-12));
            if (v[i] == 0.0) ++zeros;
        }
        CHECK(zeros == 1);
    }
}

TEST_CASE("eigenvalues rejects complex pairs") {
    Model kraw = krawtchouk_model({3, 0.5});
    QSequence broken = kraw.seq;
    broken.solution.tau2 = 1.0; // flips (lambda(k) - tau0)/tau2 negative
    CHECK_THROWS_WITH_AS(eigenvalues(broken), doctest::Contains("k = "), std::domain_error);
}

TEST_CASE("eigenvector basics") {
    Model kraw = krawtchouk_model({4, 0.3});
    // zero mode has vanishing odd components
    std::vector<double> zero_mode = eigenvector(kraw.seq, 0.0);
    for (std::size_t i = 1; i < zero_mode.size(); i += 2) CHECK(zero_mode[i] == 0.0);

    // even components agree between x_k^+ and x_k^-; odd components flip sign
    std::vector<double> plus = eigenvector(kraw.seq, std::sqrt(2.0));
    std::vector<double> minus = eigenvector(kraw.seq, -std::sqrt(2.0));
    for (std::size_t i = 0; i < plus.size(); ++i) {
        if (i % 2 == 0)
            CHECK(plus[i] == doctest::Approx(minus[i]).epsilon(1e-13));
        else
            CHECK(plus[i] == doctest::Approx(-minus[i]).epsilon(1e-13));
    }

    CHECK_THROWS_AS(eigenvector(kraw.seq, 0.123), std::domain_error); // not an eigenvalue
}

TEST_CASE("eigenvectors satisfy the matrix eigen-relation") {
    Model ssh = chebyshev_model({4, 0.5, 0.0, 0.0});
    TridiagonalHamiltonian H = ssh.hamiltonian();
    for (double x : eigenvalues(ssh.seq)) {
        std::vector<double> v = eigenvector(ssh.seq, x);
        CHECK(residual(H, x, v) <= 1e-12);
    }

    Model kraw = krawtchouk_model({6, 0.25});
    TridiagonalHamiltonian Hk = kraw.hamiltonian();
    for (double x : eigenvalues(kraw.seq)) CHECK(residual(Hk, x, eigenvector(kraw.seq, x)) <= 1e-12);
}

TEST_CASE("pi is exactly even and even components depend on x only through pi") {
    Model kraw = krawtchouk_model({5, 0.45});
    testsupport::Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        double x = rng.uniform(0.0, 3.0);
        CHECK(kraw.seq.pi(x) == kraw.seq.pi(-x)); // bitwise equal
    }
}

TEST_CASE("christoffel identities for the Chebyshev doubling") {
    Model ssh = chebyshev_model({5, 0.4, 0.0, 0.0});
    testsupport::Rng rng(12);
    std::vector<double> samples;
    while (samples.size() < 20) {
        double x = rng.uniform(-2.0, 2.0);
        if (std::fabs(x) < 1e-2) continue;
        samples.push_back(x);
    }
    ChristoffelReport rep = christoffel_identity_check(ssh.seq, samples, 1e-10);
    CHECK(rep.pass);
    CHECK(rep.max_even_residual <= 1e-10);
    CHECK(rep.max_odd_residual <= 1e-10);
    CHECK(rep.max_ratio_residual <= 1e-10);

    // the ratio is the constant (1+delta)/(1-delta)
    double expected_ratio = (1.0 + 0.4) / (1.0 - 0.4);
    std::vector<double> r_tau0_sanity = {};
    for (int n = 0; n < 5; ++n) {
        double v_n = eval_V(ssh.seq, n, ssh.seq.solution.tau0);
        double v_n1 = eval_V(ssh.seq, n + 1, ssh.seq.solution.tau0);
        CHECK(-v_n1 / v_n == doctest::Approx(expected_ratio).epsilon(1e-11));
    }

    // V_0 = t+_0
    CHECK(eval_V(ssh.seq, 0, 0.77) == doctest::Approx(0.5 * 1.4).epsilon(1e-14));
}

TEST_CASE("christoffel identities for finite families stop at n = N-2") {
    Model kraw = krawtchouk_model({5, 0.3});
    std::vector<double> samples{0.4, 1.3, -0.9, 2.2};
    ChristoffelReport rep = christoffel_identity_check(kraw.seq, samples, 1e-10);
    CHECK(rep.odd_index_limit == 4); // N - 1
    CHECK(rep.pass);

    // sampling the singularity is rejected
    CHECK_THROWS_AS(christoffel_identity_check(kraw.seq, {0.0}, 1e-10), std::domain_error);
}
