#include "sshchain/doubling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sshchain/errors.hpp"

namespace sshchain {

namespace {

// Residuals of identities between cancelling combinations are measured
// against the combination's pre-cancellation scale; differences below this
// floor are indistinguishable from rounding of the inputs. The couplings and
// recurrence coefficients are doubles, so the achievable violation level is
// ~2^-52 of the fold scale; the floor keeps that three orders of magnitude
// below the 1e-10 identity tolerance.
constexpr double kCancellationFloor = 1e-4;

void check_sizes(const QSequence& seq) {
    const std::size_t n = static_cast<std::size_t>(seq.N());
    if (seq.solution.t_plus.size() != n || seq.solution.t_minus.size() != n)
        throw std::invalid_argument("doubling: coupling arrays must have the family length");
}

bool is_special_root(const QSequence& seq, double x) {
    double scale = std::max(1.0, std::fabs(seq.mu_plus));
    return std::fabs(x - seq.mu_plus) <= 1e-12 * scale;
}

bool pi_on_grid(const QSequence& seq, double x) {
    double y = seq.pi(x);
    double y_scale = std::fabs(seq.solution.tau0) +
                     std::fabs(seq.solution.tau2 * (x - seq.mu_plus) * (x - seq.mu_minus));
    double tol = 1e-9 * std::max(1.0, y_scale);
    for (double g : seq.family.base.grid)
        if (std::fabs(y - g) <= tol) return true;
    return false;
}

// V_n(y) = t+_n R_n(y) + t-_{n-1} R_{n-1}(y) from a precomputed R table,
// together with the absolute-value fold that measures cancellation.
struct VFold {
    long double value = 0.0L;
    long double scale = 0.0L; // |t+_n R_n| + |t-_{n-1} R_{n-1}|
};

VFold fold_V(const QSequence& seq, int m, const std::vector<long double>& r_table) {
    const auto& sol = seq.solution;
    const int n_len = seq.N();
    VFold f;
    if (m < n_len) {
        long double term = static_cast<long double>(sol.t_plus[m]) * r_table[m];
        f.value += term;
        f.scale += std::fabs(term);
    } else if (seq.family.base.extendable) {
        long double term = static_cast<long double>(sol.t_plus_boundary) * r_table[n_len];
        f.value += term;
        f.scale += std::fabs(term);
    }
    if (m > 0) {
        long double term = static_cast<long double>(sol.t_minus[m - 1]) * r_table[m - 1];
        f.value += term;
        f.scale += std::fabs(term);
    }
    return f;
}

// R table at y = pi_x, routed through the two-sided grid evaluation whenever
// y lands on a grid point. The snap tolerance follows the rounding scale of
// the pi computation itself (tau0 and tau2 x^2 may cancel to a grid value
// many orders of magnitude below them).
std::vector<long double> r_table_for(const QSequence& seq, double x) {
    double y = seq.pi(x);
    double y_scale = std::fabs(seq.solution.tau0) +
                     std::fabs(seq.solution.tau2 * (x - seq.mu_plus) * (x - seq.mu_minus));
    double tol = 1e-9 * std::max(1.0, y_scale);
    const auto& grid = seq.family.base.grid;
    int best = -1;
    double best_dist = tol;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        double dist = std::fabs(y - grid[k]);
        if (dist <= best_dist) {
            best_dist = dist;
            best = static_cast<int>(k);
        }
    }
    if (best >= 0) return eval_R_table_grid_ld(seq.family, best);
    return eval_R_table_ld(seq.family, y);
}

// Even components at the special root x = mu_plus, where pi_x = tau0. The
// V-form cancels catastrophically for strongly dimerized chains, while the
// boundary recursion Q_{2m} = -(t+_{m-1}/t-_{m-1}) Q_{2m-2} is exact; it also
// defines the Q_{2N} entry, whose formula would need the restricted
// recurrence step at tau0.
std::vector<long double> special_even_components(const QSequence& seq, int count) {
    const auto& sol = seq.solution;
    std::vector<long double> q(static_cast<std::size_t>(count));
    q[0] = sol.t_plus[0];
    for (int m = 1; m < count; ++m)
        q[m] = -static_cast<long double>(sol.t_plus[m - 1]) / sol.t_minus[m - 1] * q[m - 1];
    return q;
}

} // namespace

ConstraintReport check_constraints(const QSequence& seq, double tol) {
    check_sizes(seq);
    const auto& fam = seq.family.base;
    const auto& sol = seq.solution;
    const int n_len = seq.N();

    for (int n = 0; n < n_len; ++n) {
        bool last_minus_ok = sol.truncated && n == n_len - 1;
        if (sol.t_plus[n] == 0.0)
            throw std::domain_error("doubling: t+_" + std::to_string(n) + " must be nonzero");
        if (sol.t_minus[n] == 0.0 && !last_minus_ok)
            throw std::domain_error("doubling: t-_" + std::to_string(n) + " must be nonzero");
    }

    ConstraintReport report;
    report.entries.reserve(static_cast<std::size_t>(n_len));
    for (int n = 0; n < n_len; ++n) {
        double next_C = (n + 1 < n_len) ? fam.C[n + 1] : (fam.extendable ? fam.ext_C_N : 0.0);
        double next_t_plus = (n + 1 < n_len) ? sol.t_plus[n + 1] : sol.t_plus_boundary;
        double lhs = seq.family.epsilon * std::sqrt(fam.A[n] * next_C);
        double r1 = std::fabs(lhs - sol.tau2 * sol.t_minus[n] * next_t_plus);
        double r2 = std::fabs(fam.A[n] + fam.C[n] + sol.tau0 +
                              sol.tau2 * (sol.t_plus[n] * sol.t_plus[n] + sol.t_minus[n] * sol.t_minus[n]));
        double scale = std::max(1.0, std::fabs(fam.A[n]) + std::fabs(fam.C[n]));
        report.entries.push_back({n, r1, r2, scale});
        double scaled = std::max(r1, r2) / scale;
        if (scaled > report.max_scaled_residual) {
            report.max_scaled_residual = scaled;
            report.worst_index = n;
        }
    }
    report.pass = report.max_scaled_residual <= tol;
    return report;
}

double eval_Q(const QSequence& seq, int n, double x) {
    check_sizes(seq);
    const int top = seq.solution.truncated ? 2 * seq.N() - 1 : 2 * seq.N();
    if (n < 0 || n > top)
        throw std::out_of_range("eval_Q: index " + std::to_string(n) + " outside [0, " + std::to_string(top) + "]");

    bool special = !seq.solution.truncated && is_special_root(seq, x);
    if (n == 2 * seq.N() && !seq.family.base.extendable && !special && !pi_on_grid(seq, x))
        throw std::domain_error("eval_Q: Q_{2N} requires pi_x on the grid or x at the special root");

    if (n % 2 == 1) {
        if (special) return 0.0;
        std::vector<long double> r_table = r_table_for(seq, x);
        return static_cast<double>((static_cast<long double>(x) - seq.mu_plus) * r_table[(n - 1) / 2]);
    }
    if (special) return static_cast<double>(special_even_components(seq, n / 2 + 1)[n / 2]);
    std::vector<long double> r_table = r_table_for(seq, x);
    return static_cast<double>(fold_V(seq, n / 2, r_table).value);
}

std::vector<double> eigenvalues(const QSequence& seq) {
    check_sizes(seq);
    const auto& sol = seq.solution;
    const int n_len = seq.N();

    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(seq.site_count()));
    if (!sol.truncated) values.push_back(seq.mu_plus);

    double half_sum = 0.5 * (seq.mu_plus + seq.mu_minus);
    double half_diff = 0.5 * (seq.mu_plus - seq.mu_minus);
    for (int k = 0; k < n_len; ++k) {
        double s = (seq.family.base.grid[k] - sol.tau0) / sol.tau2;
        double disc = half_diff * half_diff + s;
        if (disc < 0.0)
            throw std::domain_error("eigenvalues: (lambda(k) - tau0)/tau2 makes the pair at k = " + std::to_string(k) +
                                    " complex; the chain is not represented by a real symmetric matrix");
        double root = std::sqrt(disc);
        values.push_back(half_sum - root);
        values.push_back(half_sum + root);
    }
    std::sort(values.begin(), values.end());
    for (double& v : values)
        if (v == 0.0) v = 0.0; // normalize -0
    return values;
}

std::vector<double> eigenvector(const QSequence& seq, double x) {
    std::vector<double> spectrum = eigenvalues(seq);
    bool found = false;
    for (double v : spectrum)
        if (std::fabs(v - x) <= 1e-9) {
            found = true;
            break;
        }
    if (!found) throw std::domain_error("eigenvector: x = " + std::to_string(x) + " is not in the computed spectrum");

    const int sites = seq.site_count();
    std::vector<double> q(static_cast<std::size_t>(sites));

    if (!seq.solution.truncated && is_special_root(seq, x)) {
        std::vector<long double> even = special_even_components(seq, seq.N() + 1);
        for (int i = 0; i < sites; ++i) q[i] = (i % 2 == 0) ? static_cast<double>(even[i / 2]) : 0.0;
        return q;
    }

    // r_table_for snaps to the exact grid point and switches to the two-sided
    // evaluation there: x is a rounded eigenvalue, and a pure forward sweep a
    // rounding away from the grid amplifies into the eigen-relation residual.
    std::vector<long double> r_table = r_table_for(seq, x);
    for (int i = 0; i < sites; ++i) {
        if (i % 2 == 1)
            q[i] = static_cast<double>((static_cast<long double>(x) - seq.mu_plus) * r_table[(i - 1) / 2]);
        else
            q[i] = static_cast<double>(fold_V(seq, i / 2, r_table).value);
    }
    return q;
}

double eval_V(const QSequence& seq, int n, double y) {
    check_sizes(seq);
    if (n < 0 || n > seq.N()) throw std::out_of_range("eval_V: index out of range");
    std::vector<long double> r_table = eval_R_table_ld(seq.family, y);
    return static_cast<double>(fold_V(seq, n, r_table).value);
}

ChristoffelReport christoffel_identity_check(const QSequence& seq,
                                             const std::vector<double>& sample_points,
                                             double tol) {
    check_sizes(seq);
    const auto& sol = seq.solution;
    const int n_len = seq.N();
    const bool ext = seq.family.base.extendable;

    ChristoffelReport report;
    report.odd_index_limit = ext ? n_len : n_len - 1;

    // (c) zero-sum form of the ratio identity: t+_n V_n(tau0) + t-_n V_{n+1}(tau0) = 0.
    // Strongly dimerized chains make V(tau0) a difference of exponentially
    // larger terms, so the residual is taken against the fold scale.
    std::vector<long double> r_tau0 = eval_R_table_ld(seq.family, sol.tau0);
    std::vector<VFold> v_tau0(static_cast<std::size_t>(n_len) + 1);
    for (int n = 0; n <= n_len; ++n) v_tau0[n] = fold_V(seq, n, r_tau0);
    for (int n = 0; n < report.odd_index_limit; ++n) {
        long double lhs = sol.t_plus[n] * v_tau0[n].value + sol.t_minus[n] * v_tau0[n + 1].value;
        long double scale = std::max(
            {std::fabs(static_cast<long double>(sol.t_plus[n]) * v_tau0[n].value),
             std::fabs(static_cast<long double>(sol.t_minus[n]) * v_tau0[n + 1].value),
             kCancellationFloor *
                 (std::fabs(sol.t_plus[n]) * v_tau0[n].scale + std::fabs(sol.t_minus[n]) * v_tau0[n + 1].scale)});
        if (scale == 0.0L) continue;
        report.max_ratio_residual =
            std::max(report.max_ratio_residual, static_cast<double>(std::fabs(lhs) / scale));
    }

    for (double x : sample_points) {
        double y = seq.pi(x);
        if (std::fabs(y - sol.tau0) <= 1e-12 * std::max(1.0, std::fabs(sol.tau0)))
            throw std::domain_error("christoffel_identity_check: sample x = " + std::to_string(x) +
                                    " hits the removable singularity pi_x = tau0");
        std::vector<long double> r_table = eval_R_table_ld(seq.family, y);

        // (a) Q_{2n}(x) = V_n(pi_x); the second route goes through eval_R's
        // prefactor representation.
        for (int n = 0; n <= n_len; ++n) {
            double lhs = static_cast<double>(fold_V(seq, n, r_table).value);
            double rhs = 0.0;
            if (n < n_len)
                rhs += sol.t_plus[n] * eval_R(seq.family, n, y);
            else if (ext)
                rhs += sol.t_plus_boundary * eval_R(seq.family, n_len, y);
            if (n > 0) rhs += sol.t_minus[n - 1] * eval_R(seq.family, n - 1, y);
            double denom = std::max(std::fabs(lhs), std::fabs(rhs));
            if (denom == 0.0) continue;
            report.max_even_residual = std::max(report.max_even_residual, std::fabs(lhs - rhs) / denom);
        }

        // (b) the Christoffel quotient. The V(tau0) ratio equals -t+_n/t-_n by
        // identity (c); the coupling form keeps the quotient evaluable in the
        // regimes where V(tau0) itself cancels below double precision.
        for (int n = 0; n < report.odd_index_limit; ++n) {
            long double q_odd = (static_cast<long double>(x) - seq.mu_plus) * r_table[n];
            VFold v_n = fold_V(seq, n, r_table);
            VFold v_n1 = fold_V(seq, n + 1, r_table);
            long double ratio = static_cast<long double>(sol.t_plus[n]) / sol.t_minus[n];
            long double pref = static_cast<long double>(sol.tau2) * sol.t_minus[n] *
                               (static_cast<long double>(x) - seq.mu_plus) / (static_cast<long double>(y) - sol.tau0);
            long double quotient = pref * (v_n1.value + ratio * v_n.value);
            long double scale = std::max({std::fabs(q_odd), std::fabs(quotient),
                                          kCancellationFloor * std::fabs(pref) *
                                              (v_n1.scale + std::fabs(ratio) * v_n.scale)});
            if (scale == 0.0L) continue;
            report.max_odd_residual =
                std::max(report.max_odd_residual, static_cast<double>(std::fabs(q_odd - quotient) / scale));
        }
    }

    double worst = std::max({report.max_even_residual, report.max_odd_residual, report.max_ratio_residual});
    report.pass = worst <= tol;
    return report;
}

} // namespace sshchain
