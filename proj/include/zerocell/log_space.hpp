#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace zerocell {

// ln(e^a + e^b) without overflow; -inf encodes zero.
inline double log_add(double a, double b) {
    if (std::isinf(a) && a < 0) return b;
    if (std::isinf(b) && b < 0) return a;
    const double hi = a > b ? a : b;
    const double lo = a > b ? b : a;
    return hi + std::log1p(std::exp(lo - hi));
}

// ln(e^a - e^b) for a >= b. Values with b >= a collapse to zero (-inf):
// callers only reach that case through rounding of a true nonnegative difference.
inline double log_diff(double a, double b) {
    if (std::isinf(b) && b < 0) return a;
    if (b >= a) return -std::numeric_limits<double>::infinity();
    return a + std::log1p(-std::exp(b - a));
}

// A nonnegative magnitude carried as its natural logarithm.
// log() == -inf encodes an exact zero.
class LogValue {
  public:
    constexpr LogValue() : log_(-std::numeric_limits<double>::infinity()) {}

    static constexpr LogValue zero() { return LogValue{}; }

    static constexpr LogValue from_log(double lg) {
        LogValue v;
        v.log_ = lg;
        return v;
    }

    static LogValue from_value(double x) {
        if (x < 0.0) throw std::domain_error("LogValue: negative magnitude");
        return from_log(std::log(x));
    }

    constexpr double log() const { return log_; }
    double value() const { return std::exp(log_); }
    constexpr bool is_zero() const { return std::isinf(log_) && log_ < 0.0; }

    LogValue pow(double e) const { return from_log(e * log_); }

    friend LogValue operator*(LogValue a, LogValue b) { return from_log(a.log_ + b.log_); }
    friend LogValue operator/(LogValue a, LogValue b) { return from_log(a.log_ - b.log_); }
    // Sum of magnitudes (log-sum-exp).
    friend LogValue operator+(LogValue a, LogValue b) { return from_log(log_add(a.log_, b.log_)); }
    // Difference of magnitudes; requires a >= b up to rounding.
    friend LogValue operator-(LogValue a, LogValue b) { return from_log(log_diff(a.log_, b.log_)); }

  private:
    double log_;
};

} // namespace zerocell
