#pragma once

#include <array>
#include <cmath>

#include "sshchain/log_real.hpp"

namespace sshchain::qracah {

/// One q-Racah parameter, kept as coeff * q^expo so that integer powers of q
/// stay exact. Structural zeros such as A_{N-1} = 0 (from gamma = q^{-N})
/// then come out exactly zero.
struct Param {
    double coeff = 1.0;
    int expo = 0;

    double value(double q) const { return coeff * std::pow(q, expo); }
};

/// Parameter tuple (alpha, beta, gamma, delta) of the 4phi3 representation.
using Tuple = std::array<Param, 4>;

/// Dual tuple (gamma, delta, alpha, beta).
inline Tuple dual(const Tuple& rho) { return {rho[2], rho[3], rho[0], rho[1]}; }

/// P_n at integer grid index x: the terminating 4phi3 with numerators
/// q^{-n}, alpha beta q^{n+1}, q^{-x}, gamma delta q^{x+1} and denominators
/// alpha q, beta delta q, gamma q, at argument q.
double poly(const Tuple& rho, int n, int x, double q);

/// Value plus the sum of absolute series terms (conditioning scale).
struct PolyResult {
    double value = 0.0;
    double term_scale = 0.0;
};
PolyResult poly_with_scale(const Tuple& rho, int n, int x, double q);

/// Recurrence coefficients of the three-term relation in the variable
/// -(1 - q^{-x})(1 - gamma delta q^{x+1}).
double coeff_A(const Tuple& rho, int n, double q);
double coeff_C(const Tuple& rho, int n, double q);

/// The recurrence grid value -(1 - q^{-x})(1 - gamma delta q^{x+1}).
double recurrence_grid(const Tuple& rho, int x, double q);

/// Orthogonality weight w(x; rho).
LogReal weight(const Tuple& rho, int x, double q);

/// Norm h_{n, rho}. The n-independent infinite-product ratio is computed once
/// at construction.
class NormEvaluator {
public:
    NormEvaluator(const Tuple& rho, double q, double tol = 1e-16);
    LogReal operator()(int n) const;

private:
    Tuple rho_;
    double q_;
    LogReal inf_ratio_;
};

} // namespace sshchain::qracah
