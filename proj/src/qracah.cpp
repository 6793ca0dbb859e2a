#include "sshchain/qracah.hpp"

#include <stdexcept>

#include "sshchain/special_functions.hpp"

namespace sshchain::qracah {

namespace {

// 1 - c * q^e, exact zero when c == 1 and e == 0.
double one_minus(double c, int e, double q) { return 1.0 - c * std::pow(q, e); }

double prod2(const Param& a, const Param& b, int shift, double q) {
    return a.coeff * b.coeff * std::pow(q, a.expo + b.expo + shift);
}

} // namespace

PolyResult poly_with_scale(const Tuple& rho, int n, int x, double q) {
    const Param& a = rho[0];
    const Param& b = rho[1];
    const Param& g = rho[2];
    const Param& d = rho[3];

    // The sum terminates at min(n, x). Leading with the smaller index makes
    // the cutoff structural; otherwise the (q^{-min};q)_k factor only reaches
    // rounding-level zero and huge q^{-max} tail terms leak in.
    HypergeometricSpec spec;
    if (x < n)
        spec.numerator_params = {
            std::pow(q, -x),
            prod2(g, d, x + 1, q),   // gamma delta q^{x+1}
            std::pow(q, -n),
            prod2(a, b, n + 1, q),   // alpha beta q^{n+1}
        };
    else
        spec.numerator_params = {
            std::pow(q, -n),
            prod2(a, b, n + 1, q),
            std::pow(q, -x),
            prod2(g, d, x + 1, q),
        };
    spec.denominator_params = {
        a.coeff * std::pow(q, a.expo + 1),
        prod2(b, d, 1, q),
        g.coeff * std::pow(q, g.expo + 1),
    };
    spec.argument = q;
    spec.q = q;
    HypergeometricResult r = hypergeometric_with_scale(spec);
    return {r.value, r.term_scale};
}

double poly(const Tuple& rho, int n, int x, double q) { return poly_with_scale(rho, n, x, q).value; }

double coeff_A(const Tuple& rho, int n, double q) {
    const Param& a = rho[0];
    const Param& b = rho[1];
    const Param& g = rho[2];
    const Param& d = rho[3];
    double ab = a.coeff * b.coeff;
    int ab_e = a.expo + b.expo;
    double num = one_minus(g.coeff, g.expo + n + 1, q) * one_minus(a.coeff, a.expo + n + 1, q) *
                 one_minus(ab, ab_e + n + 1, q) * one_minus(b.coeff * d.coeff, b.expo + d.expo + n + 1, q);
    double den = one_minus(ab, ab_e + 2 * n + 1, q) * one_minus(ab, ab_e + 2 * n + 2, q);
    return num / den;
}

double coeff_C(const Tuple& rho, int n, double q) {
    const Param& a = rho[0];
    const Param& b = rho[1];
    const Param& g = rho[2];
    const Param& d = rho[3];
    double ab = a.coeff * b.coeff;
    int ab_e = a.expo + b.expo;
    // (gamma - alpha beta q^n) and (delta - alpha q^n) as two-term differences
    double gm = g.coeff * std::pow(q, g.expo) - ab * std::pow(q, ab_e + n);
    double dm = d.coeff * std::pow(q, d.expo) - a.coeff * std::pow(q, a.expo + n);
    double num = q * one_minus(1.0, n, q) * one_minus(b.coeff, b.expo + n, q) * gm * dm;
    double den = one_minus(ab, ab_e + 2 * n, q) * one_minus(ab, ab_e + 2 * n + 1, q);
    return num / den;
}

double recurrence_grid(const Tuple& rho, int x, double q) {
    const Param& g = rho[2];
    const Param& d = rho[3];
    return -one_minus(1.0, -x, q) * one_minus(g.coeff * d.coeff, g.expo + d.expo + x + 1, q);
}

LogReal weight(const Tuple& rho, int x, double q) {
    const Param& a = rho[0];
    const Param& b = rho[1];
    const Param& g = rho[2];
    const Param& d = rho[3];

    auto qp = [&](double coeff, int expo) { return q_pochhammer(coeff * std::pow(q, expo), q, x); };

    LogReal num = qp(a.coeff, a.expo + 1)                                       // (alpha q;q)_x
                  * qp(b.coeff * d.coeff, b.expo + d.expo + 1)                  // (beta delta q;q)_x
                  * qp(g.coeff, g.expo + 1)                                     // (gamma q;q)_x
                  * qp(g.coeff * d.coeff, g.expo + d.expo + 1);                 // (gamma delta q;q)_x
    num *= LogReal::from_value(one_minus(g.coeff * d.coeff, g.expo + d.expo + 2 * x + 1, q));

    LogReal den = qp(1.0, 1)                                                    // (q;q)_x
                  * qp(d.coeff * g.coeff / a.coeff, d.expo + g.expo - a.expo + 1)
                  * qp(g.coeff / b.coeff, g.expo - b.expo + 1)
                  * qp(d.coeff, d.expo + 1);
    den *= LogReal::from_value(a.coeff * b.coeff * std::pow(q, a.expo + b.expo + 1)).pow_int(x);
    den *= LogReal::from_value(one_minus(g.coeff * d.coeff, g.expo + d.expo + 1, q));
    if (den.is_zero()) throw std::domain_error("qracah::weight: denominator vanishes");
    return num / den;
}

NormEvaluator::NormEvaluator(const Tuple& rho, double q, double tol) : rho_(rho), q_(q) {
    const Param& a = rho[0];
    const Param& b = rho[1];
    const Param& g = rho[2];
    const Param& d = rho[3];
    std::vector<double> nums = {
        g.coeff / (a.coeff * b.coeff) * std::pow(q, g.expo - a.expo - b.expo),  // gamma / (alpha beta)
        d.coeff / a.coeff * std::pow(q, d.expo - a.expo),                       // delta / alpha
        1.0 / b.coeff * std::pow(q, -b.expo),                                   // 1 / beta
        g.coeff * d.coeff * std::pow(q, g.expo + d.expo + 2),                   // gamma delta q^2
    };
    std::vector<double> dens = {
        1.0 / (a.coeff * b.coeff) * std::pow(q, -a.expo - b.expo - 1),          // q^{-1} / (alpha beta)
        g.coeff * d.coeff / a.coeff * std::pow(q, g.expo + d.expo - a.expo + 1),
        g.coeff / b.coeff * std::pow(q, g.expo - b.expo + 1),
        d.coeff * std::pow(q, d.expo + 1),
    };
    inf_ratio_ = q_pochhammer_inf_ratio(nums, dens, q, tol);
}

LogReal NormEvaluator::operator()(int n) const {
    const Param& a = rho_[0];
    const Param& b = rho_[1];
    const Param& g = rho_[2];
    const Param& d = rho_[3];
    const double q = q_;

    auto qp = [&](double coeff, int expo) { return q_pochhammer(coeff * std::pow(q, expo), q, n); };

    double ab1 = one_minus(a.coeff * b.coeff, a.expo + b.expo + 1, q);
    double ab2n1 = one_minus(a.coeff * b.coeff, a.expo + b.expo + 2 * n + 1, q);
    if (ab2n1 == 0.0) throw std::domain_error("qracah::NormEvaluator: (1 - alpha beta q^{2n+1}) vanishes");

    LogReal middle = LogReal::from_value(ab1) *
                     LogReal::from_value(prod2(g, d, 1, q)).pow_int(n) /
                     LogReal::from_value(ab2n1);

    LogReal fin_num = qp(1.0, 1)                                                        // (q;q)_n
                      * qp(a.coeff * b.coeff / g.coeff, a.expo + b.expo - g.expo + 1)   // (alpha beta q / gamma;q)_n
                      * qp(a.coeff / d.coeff, a.expo - d.expo + 1)                      // (alpha q / delta;q)_n
                      * qp(b.coeff, b.expo + 1);                                        // (beta q;q)_n
    LogReal fin_den = qp(a.coeff, a.expo + 1) * qp(a.coeff * b.coeff, a.expo + b.expo + 1) *
                      qp(b.coeff * d.coeff, b.expo + d.expo + 1) * qp(g.coeff, g.expo + 1);
    if (fin_den.is_zero()) throw std::domain_error("qracah::NormEvaluator: finite denominator product vanishes");

    return inf_ratio_ * middle * fin_num / fin_den;
}

} // namespace sshchain::qracah
