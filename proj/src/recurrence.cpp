#include "sshchain/recurrence.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sshchain/errors.hpp"

namespace sshchain {

void validate_family(const RecurrenceFamily& family) {
    const int n_len = family.length();
    if (n_len < 1) throw std::invalid_argument("family '" + family.label + "': length must be positive");
    if (family.C.size() != family.A.size() || family.grid.size() != family.A.size() ||
        family.weight.size() != family.A.size() || family.norm.size() != family.A.size())
        throw std::invalid_argument("family '" + family.label + "': coefficient arrays must all have length N");

    // Grid-truncated families carry the boundary conventions C_0 = A_{N-1} = 0;
    // extendable families truncate through the grid (roots of P_N) instead.
    if (!family.extendable && family.C[0] != 0.0)
        throw admissibility_error("family '" + family.label + "': C_0 must be exactly 0");
    if (!family.extendable && family.A[n_len - 1] != 0.0)
        throw admissibility_error("family '" + family.label + "': A_{N-1} must be exactly 0");
    if (family.extendable && family.A[n_len - 1] == 0.0)
        throw admissibility_error("family '" + family.label + "': extendable family needs A_{N-1} != 0");

    const int favard_top = family.extendable ? n_len - 1 : n_len - 2;
    for (int n = 0; n <= favard_top; ++n) {
        double next_C = (n + 1 < n_len) ? family.C[n + 1] : family.ext_C_N;
        if (!(family.A[n] * next_C > 0.0))
            throw admissibility_error("family '" + family.label + "': Favard positivity A_n C_{n+1} > 0 fails at n = " +
                                      std::to_string(n));
    }

    for (int i = 0; i < n_len; ++i)
        for (int j = i + 1; j < n_len; ++j)
            if (family.grid[i] == family.grid[j])
                throw admissibility_error("family '" + family.label + "': grid points " + std::to_string(i) + " and " +
                                          std::to_string(j) + " coincide");
}

double eval_P(const RecurrenceFamily& family, int n, double x) {
    const int n_len = family.length();
    const int top = family.extendable ? n_len : n_len - 1;
    if (n < 0 || n > top)
        throw std::out_of_range("eval_P: index " + std::to_string(n) + " outside [0, " + std::to_string(top) + "]");

    long double prev = 0.0L; // P_{-1}
    long double cur = 1.0L;  // P_0
    for (int m = 0; m < n; ++m) {
        // P_{m+1} = ((x + A_m + C_m) P_m - C_m P_{m-1}) / A_m
        long double next =
            ((static_cast<long double>(x) + family.A[m] + family.C[m]) * cur - family.C[m] * prev) / family.A[m];
        prev = cur;
        cur = next;
    }
    return static_cast<double>(cur);
}

SymmetrizedFamily symmetrize(RecurrenceFamily family, int epsilon) {
    if (epsilon != 1 && epsilon != -1) throw std::invalid_argument("symmetrize: epsilon must be +1 or -1");
    validate_family(family);

    const int n_len = family.length();
    const int top = family.extendable ? n_len : n_len - 1;
    std::vector<LogReal> pref(static_cast<size_t>(top) + 1);
    pref[0] = LogReal::one();
    for (int n = 0; n < top; ++n) {
        double next_C = (n + 1 < n_len) ? family.C[n + 1] : family.ext_C_N;
        double step = epsilon * family.A[n] / std::sqrt(family.A[n] * next_C);
        pref[n + 1] = pref[n] * LogReal::from_value(step);
    }
    return SymmetrizedFamily{std::move(family), epsilon, std::move(pref)};
}

double eval_R(const SymmetrizedFamily& sym, int n, double x) {
    if (n < 0 || n >= static_cast<int>(sym.prefactor.size()))
        throw std::out_of_range("eval_R: index " + std::to_string(n) + " out of range");
    double p = eval_P(sym.base, n, x);
    return (sym.prefactor[n] * LogReal::from_value(p)).value();
}

std::vector<long double> eval_R_table_ld(const SymmetrizedFamily& sym, double x) {
    const auto& fam = sym.base;
    const int n_len = fam.length();
    const int top = fam.extendable ? n_len : n_len - 1;
    std::vector<long double> acc(static_cast<size_t>(top) + 1);
    acc[0] = 1.0L;
    for (int n = 0; n < top; ++n) {
        double next_C = (n + 1 < n_len) ? fam.C[n + 1] : fam.ext_C_N;
        long double b_n = sym.epsilon * std::sqrt(static_cast<long double>(fam.A[n]) * next_C);
        long double b_prev =
            n > 0 ? sym.epsilon * std::sqrt(static_cast<long double>(fam.A[n - 1]) * fam.C[n]) : 0.0L;
        long double r_prev = n > 0 ? acc[n - 1] : 0.0L;
        acc[n + 1] = ((static_cast<long double>(x) + fam.A[n] + fam.C[n]) * acc[n] - b_prev * r_prev) / b_n;
    }
    return acc;
}

std::vector<double> eval_R_table(const SymmetrizedFamily& sym, double x) {
    std::vector<long double> acc = eval_R_table_ld(sym, x);
    return std::vector<double>(acc.begin(), acc.end());
}

std::vector<long double> eval_R_table_grid_ld(const SymmetrizedFamily& sym, int k) {
    const auto& fam = sym.base;
    const int n_len = fam.length();
    if (fam.extendable) return eval_R_table_ld(sym, fam.grid.at(static_cast<std::size_t>(k)));
    const double x = fam.grid.at(static_cast<std::size_t>(k));
    if (n_len == 1) return {1.0L};

    auto offdiag = [&](int n) { // b_n = eps sqrt(A_n C_{n+1}), n = 0..N-2
        return sym.epsilon * std::sqrt(static_cast<long double>(fam.A[n]) * fam.C[n + 1]);
    };

    std::vector<long double> fwd = eval_R_table_ld(sym, x);

    // Backward sweep from R_{N-1} := 1; the n = N-1 recurrence row closes with
    // A_{N-1} = 0 at grid points.
    std::vector<long double> bwd(static_cast<std::size_t>(n_len));
    bwd[n_len - 1] = 1.0L;
    bwd[n_len - 2] =
        (static_cast<long double>(x) + fam.A[n_len - 1] + fam.C[n_len - 1]) * bwd[n_len - 1] / offdiag(n_len - 2);
    for (int n = n_len - 2; n >= 1; --n)
        bwd[n - 1] = ((static_cast<long double>(x) + fam.A[n] + fam.C[n]) * bwd[n] - offdiag(n) * bwd[n + 1]) /
                     offdiag(n - 1);

    // Join at the upper turning point: the largest n whose local Gershgorin
    // interval a_n +- (|b_n| + |b_{n-1}|) still contains x. Beyond it the true
    // solution decays, which is exactly where the forward sweep goes unstable
    // (and where the backward one is reliable).
    int junction = 0;
    for (int n = 0; n < n_len; ++n) {
        double a_n = -(fam.A[n] + fam.C[n]);
        double radius = 0.0;
        if (n < n_len - 1) radius += std::fabs(static_cast<double>(offdiag(n)));
        if (n > 0) radius += std::fabs(static_cast<double>(offdiag(n - 1)));
        if (std::fabs(x - a_n) <= radius) junction = n;
    }
    // Nudge off an eigenvector node, where matching would divide by ~0.
    int best = junction;
    for (int n = std::max(0, junction - 2); n <= std::min(n_len - 1, junction + 2); ++n)
        if (std::fabs(fwd[n] * bwd[n]) > std::fabs(fwd[best] * bwd[best])) best = n;
    junction = best;
    if (bwd[junction] == 0.0L || fwd[junction] == 0.0L) return fwd;

    long double match = fwd[junction] / bwd[junction];
    std::vector<long double> table = fwd;
    for (int n = junction + 1; n < n_len; ++n) table[n] = bwd[n] * match;
    return table;
}

OrthogonalityReport check_orthogonality(const RecurrenceFamily& family) {
    const int n_len = family.length();

    auto logreal_of = [](long double v) {
        if (v == 0.0L) return LogReal();
        return LogReal::from_log(v > 0.0L ? 1 : -1, static_cast<double>(std::log(std::fabs(v))));
    };

    // P_n(lambda(k)) = R_n(lambda(k)) / prefactor(n), through the two-sided
    // grid tables: the plain forward recurrence loses the decaying tails of
    // localized spectral vectors. Stored as LogReal to survive the dynamic
    // range.
    SymmetrizedFamily sym = symmetrize(family, 1);
    std::vector<std::vector<LogReal>> poly(n_len, std::vector<LogReal>(n_len));
    for (int k = 0; k < n_len; ++k) {
        std::vector<long double> r_table = eval_R_table_grid_ld(sym, k);
        for (int n = 0; n < n_len; ++n) poly[n][k] = logreal_of(r_table[n]) / sym.prefactor[n];
    }

    OrthogonalityReport report;
    std::vector<LogReal> terms(n_len);
    for (int n = 0; n < n_len; ++n) {
        for (int m = n; m < n_len; ++m) {
            for (int k = 0; k < n_len; ++k) terms[k] = family.weight[k] * poly[n][k] * poly[m][k];
            LogReal s = log_sum(terms);
            double dev;
            if (n == m) {
                LogReal ratio = s / family.norm[n];
                dev = std::fabs(ratio.value() - 1.0);
            } else {
                // Scaled by sqrt(N_n N_m): the deviation of the orthonormalized
                // family, which keeps the measure meaningful when the raw norms
                // span many orders of magnitude.
                dev = (s / (family.norm[n] * family.norm[m]).abs().sqrt()).abs().value();
            }
            if (dev > report.max_deviation) {
                report.max_deviation = dev;
                report.worst_n = n;
                report.worst_m = m;
            }
        }
    }
    return report;
}

} // namespace sshchain
