#pragma once

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <vector>

namespace sshchain {

/// Signed log-magnitude scalar: represents sign * exp(log_magnitude).
/// sign == 0 encodes exact zero (log_magnitude is then meaningless).
/// Used wherever products of many factors would over- or underflow a double
/// (q-Pochhammer symbols, discrete weights, renormalization prefactors).
class LogReal {
public:
    LogReal() = default; // zero

    static LogReal from_value(double v) {
        if (v == 0.0) return LogReal();
        return LogReal(v > 0.0 ? 1 : -1, std::log(std::fabs(v)));
    }

    static LogReal from_log(int sign, double log_magnitude) {
        if (sign == 0) return LogReal();
        if (sign != 1 && sign != -1) throw std::invalid_argument("LogReal: sign must be -1, 0 or +1");
        return LogReal(sign, log_magnitude);
    }

    static LogReal one() { return LogReal(1, 0.0); }

    int sign() const { return sign_; }
    double log_magnitude() const { return log_mag_; }
    bool is_zero() const { return sign_ == 0; }

    /// Convert back to a plain double. May overflow to +-inf or underflow to 0.
    double value() const {
        if (sign_ == 0) return 0.0;
        return static_cast<double>(sign_) * std::exp(log_mag_);
    }

    LogReal operator*(const LogReal& o) const {
        if (sign_ == 0 || o.sign_ == 0) return LogReal();
        return LogReal(sign_ * o.sign_, log_mag_ + o.log_mag_);
    }

    LogReal& operator*=(const LogReal& o) {
        *this = *this * o;
        return *this;
    }

    LogReal operator/(const LogReal& o) const {
        if (o.sign_ == 0) throw std::domain_error("LogReal: division by zero");
        if (sign_ == 0) return LogReal();
        return LogReal(sign_ * o.sign_, log_mag_ - o.log_mag_);
    }

    LogReal operator-() const {
        if (sign_ == 0) return LogReal();
        return LogReal(-sign_, log_mag_);
    }

    LogReal abs() const {
        if (sign_ == 0) return LogReal();
        return LogReal(1, log_mag_);
    }

    /// Square root; requires a non-negative value.
    LogReal sqrt() const {
        if (sign_ == 0) return LogReal();
        if (sign_ < 0) throw std::domain_error("LogReal: sqrt of negative value");
        return LogReal(1, 0.5 * log_mag_);
    }

    LogReal pow_int(long long e) const {
        if (sign_ == 0) return e == 0 ? one() : LogReal();
        int s = (sign_ < 0 && (e % 2 != 0)) ? -1 : 1;
        return LogReal(s, log_mag_ * static_cast<double>(e));
    }

private:
    LogReal(int s, double m) : sign_(s), log_mag_(m) {}

    int sign_ = 0;
    double log_mag_ = -std::numeric_limits<double>::infinity();
};

/// Signed sum of LogReal terms, rescaled by the largest magnitude so the
/// accumulation never leaves the representable range.
inline LogReal log_sum(const std::vector<LogReal>& terms) {
    double max_log = -std::numeric_limits<double>::infinity();
    for (const auto& t : terms)
        if (!t.is_zero() && t.log_magnitude() > max_log) max_log = t.log_magnitude();
    if (max_log == -std::numeric_limits<double>::infinity()) return LogReal();

    long double acc = 0.0L;
    for (const auto& t : terms) {
        if (t.is_zero()) continue;
        acc += static_cast<long double>(t.sign()) * std::exp(static_cast<long double>(t.log_magnitude() - max_log));
    }
    if (acc == 0.0L) return LogReal();
    int s = acc > 0.0L ? 1 : -1;
    return LogReal::from_log(s, max_log + static_cast<double>(std::log(std::fabs(acc))));
}

} // namespace sshchain
