#include "sshchain/special_functions.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "sshchain/errors.hpp"

namespace sshchain {

namespace {

void require_q_in_unit_interval(double q) {
    if (!(q > 0.0 && q < 1.0))
        throw std::domain_error("q must lie in (0,1), got " + std::to_string(q));
}

// Decodes the non-negative integer n from the terminating parameter.
int decode_termination_ordinary(double a0) {
    double n = std::round(-a0);
    if (n < 0.0 || std::fabs(a0 + n) > 1e-9 * std::max(1.0, std::fabs(a0)))
        throw std::domain_error("first numerator parameter must be a non-positive integer -n");
    return static_cast<int>(n);
}

int decode_termination_q(double a0, double q) {
    if (!(a0 > 0.0))
        throw std::domain_error("first numerator parameter must be q^{-n} with n >= 0");
    double n = std::round(std::log(a0) / std::log(1.0 / q));
    if (n < 0.0) throw std::domain_error("first numerator parameter must be q^{-n} with n >= 0");
    double expected = std::pow(q, -n);
    if (std::fabs(a0 - expected) > 1e-9 * expected)
        throw std::domain_error("first numerator parameter does not match q^{-n} for integer n");
    return static_cast<int>(n);
}

} // namespace

double pochhammer(double b, int k) {
    if (k < 0) throw std::domain_error("pochhammer: k must be non-negative");
    double prod = 1.0;
    for (int j = 0; j < k; ++j) prod *= b + j;
    return prod;
}

LogReal q_pochhammer(double b, double q, int k) {
    require_q_in_unit_interval(q);
    if (k < 0) throw std::domain_error("q_pochhammer: k must be non-negative");
    LogReal prod = LogReal::one();
    double qj = 1.0;
    for (int j = 0; j < k; ++j) {
        prod *= LogReal::from_value(1.0 - b * qj);
        if (prod.is_zero()) return prod;
        qj *= q;
    }
    return prod;
}

LogReal q_pochhammer_inf(double b, double q, double tol) {
    require_q_in_unit_interval(q);
    constexpr int kMaxFactors = 1'000'000;
    LogReal prod = LogReal::one();
    double bqm = b;
    for (int m = 0; m < kMaxFactors; ++m) {
        if (std::fabs(bqm) < tol) return prod;
        prod *= LogReal::from_value(1.0 - bqm);
        if (prod.is_zero()) return prod;
        bqm *= q;
    }
    throw convergence_error("q_pochhammer_inf: factor magnitude failed to shrink below tol");
}

LogReal q_pochhammer_inf_ratio(const std::vector<double>& numerators,
                               const std::vector<double>& denominators,
                               double q, double tol) {
    require_q_in_unit_interval(q);
    LogReal result = LogReal::one();
    for (double a : numerators) result *= q_pochhammer_inf(a, q, tol);
    for (double b : denominators) {
        LogReal d = q_pochhammer_inf(b, q, tol);
        if (d.is_zero())
            throw std::domain_error("q_pochhammer_inf_ratio: denominator factor (b;q)_inf vanishes, b = " +
                                    std::to_string(b));
        result = result / d;
    }
    return result;
}

HypergeometricResult hypergeometric_with_scale(const HypergeometricSpec& spec) {
    if (spec.numerator_params.empty())
        throw std::domain_error("hypergeometric: need at least the terminating numerator parameter");

    if (spec.q) {
        double q = *spec.q;
        require_q_in_unit_interval(q);
        const int n = decode_termination_q(spec.numerator_params.front(), q);
        long double sum = 1.0L, term = 1.0L, scale = 1.0L;
        double qk = 1.0; // q^k
        for (int k = 0; k < n; ++k) {
            long double ratio = 1.0L;
            for (double a : spec.numerator_params) ratio *= 1.0L - static_cast<long double>(a) * qk;
            for (double b : spec.denominator_params) {
                long double f = 1.0L - static_cast<long double>(b) * qk;
                if (f == 0.0L)
                    throw std::domain_error("hypergeometric: denominator q-Pochhammer factor vanishes at k = " +
                                            std::to_string(k + 1));
                ratio /= f;
            }
            long double qk1 = 1.0L - static_cast<long double>(std::pow(q, k + 1));
            ratio *= static_cast<long double>(spec.argument) / qk1;
            term *= ratio;
            sum += term;
            scale += std::fabs(static_cast<double>(term));
            qk *= q;
        }
        return {static_cast<double>(sum), static_cast<double>(scale)};
    }

    const int n = decode_termination_ordinary(spec.numerator_params.front());
    long double sum = 1.0L, term = 1.0L, scale = 1.0L;
    for (int k = 0; k < n; ++k) {
        long double ratio = 1.0L;
        for (double a : spec.numerator_params) ratio *= static_cast<long double>(a) + k;
        for (double b : spec.denominator_params) {
            long double f = static_cast<long double>(b) + k;
            if (f == 0.0L)
                throw std::domain_error("hypergeometric: denominator Pochhammer factor vanishes at k = " +
                                        std::to_string(k + 1));
            ratio /= f;
        }
        ratio *= static_cast<long double>(spec.argument) / (k + 1);
        term *= ratio;
        sum += term;
        scale += std::fabs(static_cast<double>(term));
    }
    return {static_cast<double>(sum), static_cast<double>(scale)};
}

double hypergeometric(const HypergeometricSpec& spec) { return hypergeometric_with_scale(spec).value; }

} // namespace sshchain
