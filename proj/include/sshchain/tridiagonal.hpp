#pragma once

#include <cstddef>
#include <vector>

namespace sshchain {

/// Real symmetric tridiagonal matrix; only the diagonal and one off-diagonal
/// are stored.
struct TridiagonalHamiltonian {
    std::vector<double> diagonal;     // size n
    std::vector<double> offdiagonal;  // size n-1

    std::size_t size() const { return diagonal.size(); }
    /// Max absolute row sum.
    double inf_norm() const;
};

/// Builds the chain Hamiltonian with off-diagonals interleaving t+ and t-
/// (t+_0, t-_0, t+_1, ...) and diagonal alternating mu_plus / mu_minus
/// starting at site 0. In truncated mode the final row and column (site 2N)
/// are dropped, so the last off-diagonal entry is t+_{N-1} and t-_{N-1} is
/// not used. Throws std::domain_error on a zero coupling in standard mode.
TridiagonalHamiltonian assemble_chain(const std::vector<double>& t_plus,
                                      const std::vector<double>& t_minus,
                                      double mu_plus, double mu_minus,
                                      bool truncated);

struct EigenSystem {
    enum class Source { analytic, numeric_oracle };

    std::vector<double> eigenvalues;                // ascending
    std::vector<std::vector<double>> eigenvectors;  // eigenvectors[j] <-> eigenvalues[j], unit norm
    double residual_bound = 0.0;                    // max observed ||Hv - xv||_inf / (||H||_inf ||v||_inf)
    Source source = Source::numeric_oracle;
};

/// Number of eigenvalues of H strictly below sigma, via the Sturm sequence
/// sign-change count.
int sturm_count(const TridiagonalHamiltonian& H, double sigma);

/// Full spectrum by bisection on the Sturm count, refined to tol (absolute;
/// tol <= 0 selects the default 1e-12 * ||H||_inf), plus eigenvectors by
/// inverse iteration with reorthogonalization of near-degenerate clusters.
/// Deterministic. Throws convergence_error if an interval fails to shrink.
EigenSystem eig_oracle(const TridiagonalHamiltonian& H, double tol = -1.0);

/// Eigenvalues only (same bisection), for spectrum comparisons.
std::vector<double> eig_oracle_values(const TridiagonalHamiltonian& H, double tol = -1.0);

/// ||Hv - xv||_inf / (||H||_inf ||v||_inf). Throws on dimension mismatch or a
/// zero vector.
double residual(const TridiagonalHamiltonian& H, double x, const std::vector<double>& v);

} // namespace sshchain
