#pragma once

#include <optional>
#include <vector>

#include "sshchain/log_real.hpp"

namespace sshchain {

/// Pochhammer symbol (b)_k = b(b+1)...(b+k-1); (b)_0 = 1.
double pochhammer(double b, int k);

/// q-Pochhammer symbol (b;q)_k = (1-b)(1-qb)...(1-q^{k-1}b) for 0 < q < 1,
/// carried in signed log form. (b;q)_0 = 1.
LogReal q_pochhammer(double b, double q, int k);

/// Infinite q-Pochhammer symbol (b;q)_inf, truncated once the next factor
/// differs from 1 by less than tol.
LogReal q_pochhammer_inf(double b, double q, double tol);

/// prod_i (a_i;q)_inf / prod_j (b_j;q)_inf. Throws if a denominator factor
/// vanishes exactly.
LogReal q_pochhammer_inf_ratio(const std::vector<double>& numerators,
                               const std::vector<double>& denominators,
                               double q, double tol);

/// Terminating (q-)hypergeometric series.
///
/// Ordinary case (q absent):   sum_k (a_0)_k...(a_r)_k / (k! (b_1)_k...(b_r)_k) z^k
/// with a_0 = -n fixing the number of terms.
/// q-case (q in (0,1)):        sum_k (a_0;q)_k.../((b_1;q)_k...(q;q)_k) z^k
/// with a_0 = q^{-n}. The implicit k! resp. (q;q)_k factor is supplied by the
/// evaluator and must not appear in denominator_params.
struct HypergeometricSpec {
    std::vector<double> numerator_params;
    std::vector<double> denominator_params;
    double argument = 0.0;
    std::optional<double> q; // absent => ordinary hypergeometric
};

/// Evaluates the terminating sum via successive term ratios, accumulating in
/// extended precision. Throws std::domain_error when a denominator Pochhammer
/// factor vanishes before the series terminates.
double hypergeometric(const HypergeometricSpec& spec);

/// Same sum plus its conditioning scale sum_k |term_k|; residual checks of
/// identities between heavily cancelling sums normalize against it.
struct HypergeometricResult {
    double value = 0.0;
    double term_scale = 0.0;
};
HypergeometricResult hypergeometric_with_scale(const HypergeometricSpec& spec);

} // namespace sshchain
