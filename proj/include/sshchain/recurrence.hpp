#pragma once

#include <string>
#include <vector>

#include "sshchain/log_real.hpp"

namespace sshchain {

/// A finite orthogonal-polynomial family given by its three-term recurrence
///
///     x P_n(x) = A_n P_{n+1}(x) - (A_n + C_n) P_n(x) + C_n P_{n-1}(x),
///
/// with P_0 = 1, P_{-1} = 0 and C_0 = 0, orthogonal on the grid points
/// lambda(k) with weight Omega(k) and norms N_n:
///
///     sum_k Omega(k) P_n(lambda(k)) P_m(lambda(k)) = delta_{nm} N_n.
///
/// Two truncation styles are supported. In the default style A_{N-1} = 0 and
/// the n = N-1 recurrence step is valid only at grid points. In the
/// `extendable` style (Chebyshev) A_{N-1} != 0, one further step produces
/// P_N at any argument, and the grid consists of the roots of P_N.
struct RecurrenceFamily {
    std::string label;
    std::vector<double> A;        // A_0 .. A_{N-1}
    std::vector<double> C;        // C_0 .. C_{N-1}, C_0 == 0
    std::vector<double> grid;     // lambda(0) .. lambda(N-1), pairwise distinct
    std::vector<LogReal> weight;  // Omega(k)
    std::vector<LogReal> norm;    // N_n
    bool extendable = false;
    double ext_C_N = 0.0;         // C_N, used only when extendable

    int length() const { return static_cast<int>(A.size()); }
};

/// Validates structural invariants: C_0 = 0, A_{N-1} = 0 (unless extendable),
/// Favard positivity A_n C_{n+1} > 0, distinct grid. Throws
/// admissibility_error naming the offending index.
void validate_family(const RecurrenceFamily& family);

/// P_n(x) by forward recurrence. Valid for 0 <= n <= N-1, plus n = N for
/// extendable families.
double eval_P(const RecurrenceFamily& family, int n, double x);

/// The renormalized sequence R_n = eps^n prod_{k<n} A_k / sqrt(A_k C_{k+1}) P_n,
/// which satisfies the symmetric recurrence
///
///     x R_n = eps sqrt(A_n C_{n+1}) R_{n+1} - (A_n + C_n) R_n
///             + eps sqrt(A_{n-1} C_n) R_{n-1}.
struct SymmetrizedFamily {
    RecurrenceFamily base;
    int epsilon = 1;                 // +1 or -1
    std::vector<LogReal> prefactor;  // index 0..N-1 (0..N when extendable)

    int length() const { return base.length(); }
};

SymmetrizedFamily symmetrize(RecurrenceFamily family, int epsilon);

double eval_R(const SymmetrizedFamily& sym, int n, double x);

/// R_0(x) .. R_{top}(x) in one forward pass of the symmetric recurrence,
/// where top = N-1 (N when extendable). Used for eigenvector assembly.
std::vector<double> eval_R_table(const SymmetrizedFamily& sym, double x);

/// Extended-precision variant for internal identity checks.
std::vector<long double> eval_R_table_ld(const SymmetrizedFamily& sym, double x);

/// R table at the grid point lambda(k) of a grid-truncated family, assembled
/// from a forward and a backward sweep joined at the envelope peak. The pure
/// forward recurrence loses the exponentially decaying tail of localized
/// spectral vectors; the backward sweep is seeded through the A_{N-1} = 0
/// boundary relation, which holds exactly on the grid.
std::vector<long double> eval_R_table_grid_ld(const SymmetrizedFamily& sym, int k);

struct OrthogonalityReport {
    double max_deviation = 0.0; // max over (n,m) of |sum - delta N_n| / |N_n|
    int worst_n = 0;
    int worst_m = 0;
};

/// Verifies the discrete orthogonality relation over all index pairs using
/// log-rescaled compensated sums.
OrthogonalityReport check_orthogonality(const RecurrenceFamily& family);

} // namespace sshchain
