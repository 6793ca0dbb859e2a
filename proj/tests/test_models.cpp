#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sshchain/doubling.hpp"
#include "sshchain/errors.hpp"
#include "sshchain/models.hpp"
#include "sshchain/tridiagonal.hpp"
#include "support.hpp"

using namespace sshchain;

namespace {

double dot_self(const std::vector<double>& v) {
    long double s = 0.0L;
    for (double c : v) s += static_cast<long double>(c) * c;
    return static_cast<double>(s);
}

} // namespace

TEST_CASE("chebyshev model rejects fully dimerized chains") {
    CHECK_THROWS_WITH_AS(chebyshev_model({3, 1.0, 0.0, 0.0}), doctest::Contains("|delta| < 1"), std::domain_error);
    CHECK_THROWS_AS(chebyshev_model({3, -1.0, 0.0, 0.0}), std::domain_error);
    CHECK_THROWS_AS(chebyshev_model({0, 0.5, 0.0, 0.0}), std::domain_error);
}

TEST_CASE("krawtchouk model rejects p outside (0,1)") {
    CHECK_THROWS_AS(krawtchouk_model({3, 0.0}), std::domain_error);
    CHECK_THROWS_AS(krawtchouk_model({3, 1.2}), std::domain_error);
}

TEST_CASE("ssh closed spectrum matches the oracle") {
    for (double delta : {-0.5, 0.0, 0.5}) {
        for (int n_cells : {1, 4, 9}) {
            Model m = chebyshev_model({n_cells, delta, 0.0, 0.0});
            std::vector<double> analytic = closed_spectrum(m);
            std::vector<double> oracle = eig_oracle_values(m.hamiltonian());
            REQUIRE(analytic.size() == oracle.size());
            for (std::size_t i = 0; i < analytic.size(); ++i)
                CHECK(std::fabs(analytic[i] - oracle[i]) <= 1e-11);
        }
    }
}

TEST_CASE("chemical-potential variant: spectrum and diagonal") {
    Model m = chebyshev_model({3, 0.4, 0.3, -0.2});
    CHECK(m.label == "ssh-mu");
    TridiagonalHamiltonian H = m.hamiltonian();
    CHECK(H.diagonal == std::vector<double>{0.3, -0.2, 0.3, -0.2, 0.3, -0.2, 0.3});

    std::vector<double> analytic = closed_spectrum(m);
    std::vector<double> oracle = eig_oracle_values(H);
    for (std::size_t i = 0; i < analytic.size(); ++i) CHECK(std::fabs(analytic[i] - oracle[i]) <= 1e-11);

    // the special eigenvalue is mu_plus, and its odd components vanish
    bool found = false;
    for (double x : analytic)
        if (x == doctest::Approx(0.3).epsilon(1e-13)) found = true;
    CHECK(found);
    std::vector<double> special = eigenvector(m.seq, 0.3);
    for (std::size_t i = 1; i < special.size(); i += 2) CHECK(special[i] == 0.0);
    CHECK(residual(H, 0.3, special) <= 1e-12);
}

TEST_CASE("krawtchouk spectrum, couplings, zero-mode norm") {
    Model m = krawtchouk_model({3, 0.5});
    std::vector<double> spec = closed_spectrum(m);
    std::vector<double> expected{-std::sqrt(3.0), -std::sqrt(2.0), -1.0, 0.0, 1.0, std::sqrt(2.0), std::sqrt(3.0)};
    for (std::size_t i = 0; i < spec.size(); ++i) CHECK(spec[i] == doctest::Approx(expected[i]).epsilon(1e-14));

    // t+_0 = sqrt(pN) = u_0 sqrt(1+delta) with delta = 2p-1, u_0 = sqrt(N/2)
    Model m2 = krawtchouk_model({5, 0.3});
    double delta = 2.0 * 0.3 - 1.0;
    double u0 = std::sqrt(5.0 / 2.0);
    CHECK(m2.seq.solution.t_plus[0] == doctest::Approx(u0 * std::sqrt(1.0 + delta)).epsilon(1e-14));
    // t-_n = u_{N-n-1} sqrt(1-delta)
    for (int n = 0; n < 5; ++n) {
        double u = std::sqrt((5.0 - (5 - n - 1)) / 2.0);
        CHECK(m2.seq.solution.t_minus[n] == doctest::Approx(u * std::sqrt(1.0 - delta)).epsilon(1e-13));
    }

    // Q(0)^t Q(0) = pN / (1-p)^N
    for (double p : {0.3, 0.5, 0.7}) {
        for (int n_cells : {1, 2, 5, 8}) {
            Model km = krawtchouk_model({n_cells, p});
            double direct = dot_self(eigenvector(km.seq, 0.0));
            double closed = p * n_cells / std::pow(1.0 - p, n_cells);
            CHECK(direct == doctest::Approx(closed).epsilon(1e-12));
            CHECK(eigvec_norm_closed(km, std::nullopt) == doctest::Approx(closed).epsilon(1e-12));
        }
    }
}

TEST_CASE("krawtchouk closed-form eigenvector components") {
    // Q_0(x_k^pm) = sqrt(Np) for all k
    Model m = krawtchouk_model({4, 0.3});
    for (int k = 0; k < 4; ++k)
        CHECK(closed_form_eigvec_even(m, 0, k) == doctest::Approx(std::sqrt(4 * 0.3)).epsilon(1e-13));

    // zero mode: Q_{2n}(0) = (-1)^n sqrt(N p^{n+1} (1-p)^{-n} binom(N,n))
    for (int n = 0; n <= 4; ++n) {
        double binom = std::tgamma(5.0) / (std::tgamma(n + 1.0) * std::tgamma(5.0 - n));
        double expected = ((n % 2) ? -1.0 : 1.0) * std::sqrt(4.0 * std::pow(0.3, n + 1) / std::pow(0.7, n) * binom);
        CHECK(closed_form_eigvec_even(m, n, std::nullopt) == doctest::Approx(expected).epsilon(1e-12));
    }

    // closed form equals the doubling-definition evaluation for all (n, k), N <= 20
    for (auto [n_cells, p] : std::vector<std::pair<int, double>>{{3, 0.5}, {8, 0.25}, {20, 0.65}}) {
        Model km = krawtchouk_model({n_cells, p});
        for (int k = 0; k < n_cells; ++k) {
            double s = static_cast<double>(k) + 1.0;
            std::vector<double> v = eigenvector(km.seq, std::sqrt(s));
            double scale = 0.0;
            for (double c : v) scale = std::max(scale, std::fabs(c));
            for (int n = 0; n <= n_cells; ++n) {
                double closed = closed_form_eigvec_even(km, n, k);
                CHECK(std::fabs(closed - v[2 * n]) <= 1e-10 * scale);
            }
        }
        // zero mode
        std::vector<double> v0 = eigenvector(km.seq, 0.0);
        double scale0 = 0.0;
        for (double c : v0) scale0 = std::max(scale0, std::fabs(c));
        for (int n = 0; n <= n_cells; ++n)
            CHECK(std::fabs(closed_form_eigvec_even(km, n, std::nullopt) - v0[2 * n]) <= 1e-10 * scale0);
    }
}

TEST_CASE("krawtchouk closed-form norms match direct dot products") {
    for (auto [n_cells, p] : std::vector<std::pair<int, double>>{{4, 0.3}, {10, 0.5}, {30, 0.7}}) {
        Model m = krawtchouk_model({n_cells, p});
        for (int k = 0; k < n_cells; ++k) {
            double x = std::sqrt(static_cast<double>(k) + 1.0);
            double direct = dot_self(eigenvector(m.seq, x));
            double closed = eigvec_norm_closed(m, k);
            CHECK(std::fabs(direct - closed) <= 1e-8 * std::fabs(closed));
        }
    }
}

TEST_CASE("krawtchouk contiguity and self-duality") {
    for (auto [n_cells, p] : std::vector<std::pair<int, double>>{{5, 0.2}, {12, 0.5}, {20, 0.8}}) {
        Model m = krawtchouk_model({n_cells, p});
        CHECK(contiguity_max_residual(m) <= 1e-10);
        CHECK(self_duality_max_deviation(m) <= 1e-12);
    }
}

TEST_CASE("hamiltonian assembly patterns from models") {
    Model m = krawtchouk_model({2, 0.5});
    TridiagonalHamiltonian H = m.hamiltonian();
    double s = std::sqrt(0.5);
    REQUIRE(H.offdiagonal.size() == 4);
    CHECK(H.offdiagonal[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(H.offdiagonal[1] == doctest::Approx(s).epsilon(1e-15));
    CHECK(H.offdiagonal[2] == doctest::Approx(s).epsilon(1e-15));
    CHECK(H.offdiagonal[3] == doctest::Approx(1.0).epsilon(1e-15));
}

// ---- q-Racah ---------------------------------------------------------------

TEST_CASE("q-racah I: constraints, spectrum, eigenvectors") {
    for (const QRacahSSHParams& params : qracah_known_good(1)) {
        Model m = qracah_model(params);
        CHECK(m.seq.solution.epsilon == -1); // the printed solution sign

        ConstraintReport cons = check_constraints(m.seq, 1e-12);
        INFO("params N=", params.N, " q=", params.q, " alpha=", params.alpha, " beta=", params.beta,
             " delta=", params.delta, " worst=", cons.max_scaled_residual);
        CHECK(cons.pass);

        // spectrum formula at k = 0 is +-sqrt((1 - q^{-N})(delta - 1))
        std::vector<double> spec = closed_spectrum(m);
        double s0 = (1.0 - std::pow(params.q, -params.N)) * (params.delta - 1.0);
        bool found = false;
        for (double x : spec)
            if (std::fabs(x - std::sqrt(s0)) <= 1e-12 * std::sqrt(s0)) found = true;
        CHECK(found);

        // closed spectrum vs generic doubling route vs oracle
        std::vector<double> generic = eigenvalues(m.seq);
        REQUIRE(spec.size() == generic.size());
        double radius = std::max(std::fabs(spec.front()), std::fabs(spec.back()));
        for (std::size_t i = 0; i < spec.size(); ++i)
            CHECK(std::fabs(spec[i] - generic[i]) <= 1e-12 * radius);
        std::vector<double> oracle = eig_oracle_values(m.hamiltonian());
        for (std::size_t i = 0; i < spec.size(); ++i)
            CHECK(std::fabs(spec[i] - oracle[i]) <= 1e-8 * radius);

        // eigen-relation for every eigenvector
        TridiagonalHamiltonian H = m.hamiltonian();
        for (double x : generic) CHECK(residual(H, x, eigenvector(m.seq, x)) <= 1e-11);

        // odd chain: 2N+1 sites, zero eigenvalue present
        CHECK(m.site_count() == 2 * params.N + 1);
        CHECK(std::fabs(generic[params.N]) == 0.0);
    }
}

TEST_CASE("q-racah II: truncated chain of 2N sites without zero mode") {
    for (const QRacahSSHParams& params : qracah_known_good(2)) {
        Model m = qracah_model(params);
        CHECK(m.seq.solution.truncated);
        CHECK(m.seq.solution.t_minus[params.N - 1] == 0.0);
        CHECK(m.site_count() == 2 * params.N);

        ConstraintReport cons = check_constraints(m.seq, 1e-12);
        INFO("params N=", params.N, " q=", params.q, " alpha=", params.alpha, " beta=", params.beta,
             " delta=", params.delta, " worst=", cons.max_scaled_residual);
        CHECK(cons.pass);

        std::vector<double> spec = closed_spectrum(m);
        CHECK(static_cast<int>(spec.size()) == 2 * params.N);
        for (double x : spec) CHECK(std::fabs(x) > 1e-12);

        std::vector<double> oracle = eig_oracle_values(m.hamiltonian());
        double radius = std::max(std::fabs(spec.front()), std::fabs(spec.back()));
        for (std::size_t i = 0; i < spec.size(); ++i)
            CHECK(std::fabs(spec[i] - oracle[i]) <= 1e-8 * radius);

        TridiagonalHamiltonian H = m.hamiltonian();
        for (double x : eigenvalues(m.seq)) CHECK(residual(H, x, eigenvector(m.seq, x)) <= 1e-11);
    }
}

TEST_CASE("q-racah closed-form even components agree with the doubling evaluation") {
    for (int kind : {1, 2}) {
        for (const QRacahSSHParams& params : qracah_known_good(kind)) {
            if (params.N > 20) continue;
            Model m = qracah_model(params);
            const int even_top = kind == 1 ? params.N : params.N - 1;
            for (int k = 0; k < params.N; ++k) {
                double s = (m.seq.family.base.grid[k] - m.seq.solution.tau0) / m.seq.solution.tau2;
                std::vector<double> v = eigenvector(m.seq, std::sqrt(s));
                double scale = 0.0;
                for (double c : v) scale = std::max(scale, std::fabs(c));
                for (int n = 0; n <= even_top; ++n) {
                    double closed = closed_form_eigvec_even(m, n, k);
                    INFO("kind=", kind, " N=", params.N, " q=", params.q, " n=", n, " k=", k);
                    CHECK(std::fabs(closed - v[2 * n]) <= 1e-10 * scale);
                }
            }
            if (kind == 1) {
                std::vector<double> v0 = eigenvector(m.seq, 0.0);
                double scale0 = 0.0;
                for (double c : v0) scale0 = std::max(scale0, std::fabs(c));
                for (int n = 0; n <= params.N; ++n)
                    CHECK(std::fabs(closed_form_eigvec_even(m, n, std::nullopt) - v0[2 * n]) <= 1e-10 * scale0);
            } else {
                CHECK_THROWS_AS(closed_form_eigvec_even(m, 0, std::nullopt), std::domain_error);
            }
        }
    }
}

TEST_CASE("q-racah closed-form norms match direct dot products") {
    for (int kind : {1, 2}) {
        for (const QRacahSSHParams& params : qracah_known_good(kind)) {
            Model m = qracah_model(params);
            for (int k = 0; k < params.N; ++k) {
                double s = (m.seq.family.base.grid[k] - m.seq.solution.tau0) / m.seq.solution.tau2;
                double direct = dot_self(eigenvector(m.seq, std::sqrt(s)));
                double closed = eigvec_norm_closed(m, k);
                INFO("kind=", kind, " N=", params.N, " q=", params.q, " k=", k);
                CHECK(std::fabs(direct - closed) <= 1e-8 * std::fabs(closed));
            }
            if (kind == 1) {
                double direct = dot_self(eigenvector(m.seq, 0.0));
                double closed = eigvec_norm_closed(m, std::nullopt);
                CHECK(std::fabs(direct - closed) <= 1e-8 * std::fabs(closed));
            }
        }
    }
}

TEST_CASE("q-racah duality, dual weight product, contiguity") {
    for (int kind : {1, 2}) {
        for (const QRacahSSHParams& params : qracah_known_good(kind)) {
            Model m = qracah_model(params);
            DualityReport dual = duality_check(m);
            CHECK(dual.max_poly_deviation <= 1e-10);
            CHECK(dual.max_weight_deviation <= 1e-10);
            CHECK(dual.nu_sign_consistent);
            CHECK(contiguity_max_residual(m) <= 1e-10);
        }
    }
}

TEST_CASE("q-racah admissibility errors carry the violated condition") {
    // delta > 1 makes the model-I spectrum radicand negative
    CHECK_THROWS_AS(qracah_model({4, 0.5, 0.3, 0.4, 2.0, 1}), admissibility_error);
    // alpha-beta sign flip breaks a coupling radicand
    CHECK_THROWS_AS(qracah_model({4, 0.5, 0.9, 0.4, 0.3, 1}), admissibility_error);
    CHECK_THROWS_AS(qracah_model({4, 1.5, 0.3, 0.4, -0.5, 1}), std::domain_error); // q out of range
}

TEST_CASE("q-racah default scan mixes admissible and inadmissible points") {
    for (int kind : {1, 2}) {
        auto entries = qracah_scan(kind, 0.5, 4);
        int admissible = 0, skipped = 0;
        for (const auto& e : entries) {
            if (e.admissible)
                ++admissible;
            else {
                ++skipped;
                CHECK_FALSE(e.reason.empty());
            }
        }
        CHECK(admissible > 0);
        CHECK(skipped > 0);
    }
}

TEST_CASE("corrupt_coupling perturbs exactly one bond") {
    Model m = krawtchouk_model({3, 0.4});
    Model bad = corrupt_coupling(m, 2, 1e-3); // bond 2 = t+_1
    CHECK(bad.seq.solution.t_plus[1] == doctest::Approx(m.seq.solution.t_plus[1] * 1.001).epsilon(1e-15));
    CHECK(bad.seq.solution.t_plus[0] == m.seq.solution.t_plus[0]);
    CHECK(bad.seq.solution.t_minus[0] == m.seq.solution.t_minus[0]);
    CHECK_THROWS_AS(corrupt_coupling(m, 6, 1e-3), std::out_of_range);
}
