#pragma once

#include <string>
#include <vector>

#include "sshchain/recurrence.hpp"

namespace sshchain {

/// Parameters (eps, tau0, tau2, t+_n, t-_n) that double a symmetrized family
/// of length N into a chain of 2N+1 sites. Boundary convention t-_{-1} = 0;
/// t+_N is zero for grid-truncated families and may be nonzero for extendable
/// ones. In truncated (even-chain) mode t-_{N-1} = 0 is permitted and the
/// final site is dropped.
struct DoublingSolution {
    int epsilon = 1;
    double tau0 = 0.0;
    double tau2 = 1.0;
    std::vector<double> t_plus;   // t+_0 .. t+_{N-1}
    std::vector<double> t_minus;  // t-_0 .. t-_{N-1}
    double t_plus_boundary = 0.0; // t+_N
    bool truncated = false;
};

/// The doubled polynomial sequence
///
///     Q_{2n}(x)   = t+_n R_n(pi_x) + t-_{n-1} R_{n-1}(pi_x),
///     Q_{2n+1}(x) = (x - mu_plus) R_n(pi_x),
///     pi_x        = tau2 (x - mu_plus)(x - mu_minus) + tau0.
///
/// mu_plus = mu_minus = 0 is the plain doubling with pi_x = tau2 x^2 + tau0;
/// nonzero values give the chemical-potential variant, whose Hamiltonian
/// carries the alternating diagonal mu_plus, mu_minus.
struct QSequence {
    SymmetrizedFamily family;
    DoublingSolution solution;
    double mu_plus = 0.0;
    double mu_minus = 0.0;

    int N() const { return family.length(); }
    int site_count() const { return solution.truncated ? 2 * N() : 2 * N() + 1; }
    double pi(double x) const {
        return solution.tau2 * (x - mu_plus) * (x - mu_minus) + solution.tau0;
    }
};

struct ConstraintReport {
    struct Entry {
        int n;
        double offdiag_residual;  // |eps sqrt(A_n C_{n+1}) - tau2 t-_n t+_{n+1}|
        double diagonal_residual; // |A_n + C_n + tau0 + tau2 (t+_n^2 + t-_n^2)|
        double scale;             // max(1, |A_n| + |C_n|)
    };
    std::vector<Entry> entries;
    double max_scaled_residual = 0.0;
    int worst_index = 0;
    bool pass = false;
};

/// Checks the doubling constraints at tolerance tol (scaled per entry).
/// Throws std::domain_error when a required coupling is zero.
ConstraintReport check_constraints(const QSequence& seq, double tol);

/// Q_n(x) for 0 <= n <= 2N (2N-1 in truncated mode). The index n = 2N is
/// restricted: for grid-truncated families x must satisfy pi_x in {lambda(k)}
/// or x = mu_plus; extendable families evaluate anywhere.
double eval_Q(const QSequence& seq, int n, double x);

/// The 2N+1 closed-form eigenvalues mu_plus and the root pairs of
/// pi_x = lambda(k), ascending, with -0 normalized to 0. Truncated mode
/// returns the 2N root-pair values only. Throws std::domain_error citing the
/// first k whose pair discriminant is negative.
std::vector<double> eigenvalues(const QSequence& seq);

/// The unnormalized eigenvector (Q_0(x), ..., Q_{2N}(x)) for an eigenvalue x
/// (validated against eigenvalues() at 1e-9 absolute). Q_1(x) = x - mu_plus
/// fixes the scale.
std::vector<double> eigenvector(const QSequence& seq, double x);

/// V_n(y) = t+_n R_n(y) + t-_{n-1} R_{n-1}(y) for 0 <= n <= N, evaluated at a
/// family-coordinate argument y.
double eval_V(const QSequence& seq, int n, double y);

struct ChristoffelReport {
    double max_even_residual = 0.0;  // Q_{2n}(x) vs V_n(pi_x)
    double max_odd_residual = 0.0;   // Q_{2n+1}(x) vs the Christoffel quotient
    double max_ratio_residual = 0.0; // t+_n/t-_n vs -V_{n+1}(tau0)/V_n(tau0)
    int odd_index_limit = 0;         // identities checked for n below this
    bool pass = false;
};

/// Verifies the Christoffel identities at the given sample points. The
/// quotient and ratio identities are checked for n = 0..N-2 (all n for
/// extendable families, where the n = N-1 recurrence holds everywhere).
/// Throws std::domain_error if a sample point puts pi_x within 1e-12 of tau0.
ChristoffelReport christoffel_identity_check(const QSequence& seq,
                                             const std::vector<double>& sample_points,
                                             double tol);

} // namespace sshchain
