#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "zerocell/log_space.hpp"

namespace zerocell {

inline constexpr double kPi = 3.14159265358979323846;

// ln Gamma(x) for x > 0.
inline double log_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma: requires x > 0");
    return std::lgamma(x);
}

// ln kappa_n, the volume of the unit ball in dimension n.
inline LogValue log_unit_ball_volume(int n) {
    if (n < 0) throw std::domain_error("log_unit_ball_volume: requires n >= 0");
    return LogValue::from_log(0.5 * n * std::log(kPi) - log_gamma(0.5 * n + 1.0));
}

namespace detail {

// Continued fraction for the incomplete beta integral (modified Lentz).
inline double beta_cf(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 500; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 3e-16) break;
    }
    return h;
}

} // namespace detail

// Regularized incomplete beta function I_x(a, b).
// Continued fraction with the symmetry flip at x > (a+1)/(a+b+2).
inline double reg_inc_beta(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("reg_inc_beta: requires a, b > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("reg_inc_beta: requires x in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double ln_front = log_gamma(a + b) - log_gamma(a) - log_gamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return std::exp(ln_front) * detail::beta_cf(a, b, x) / a;
    }
    return 1.0 - std::exp(ln_front) * detail::beta_cf(b, a, 1.0 - x) / b;
}

enum class GammaTail { lower, upper };

// ln Gamma_l(s, x) or ln Gamma_u(s, x), the unnormalized incomplete gamma
// integrals. Series for x < s+1, continued fraction for x >= s+1; the
// complementary tail comes from the partition against ln Gamma(s).
inline LogValue inc_gamma(GammaTail tail, double s, double x) {
    if (!(s > 0.0)) throw std::domain_error("inc_gamma: requires s > 0");
    if (!(x >= 0.0)) throw std::domain_error("inc_gamma: requires x >= 0");
    const double lg = log_gamma(s);
    if (x == 0.0) {
        return tail == GammaTail::lower ? LogValue::zero() : LogValue::from_log(lg);
    }
    double log_lower;
    double log_upper;
    if (x < s + 1.0) {
        // sum_k prod_{i<=k} x/(s+i); the leading term dominates since x < s+1
        double term = 1.0;
        double sum = 1.0;
        for (int k = 1; k <= 100000; ++k) {
            term *= x / (s + k);
            sum += term;
            if (term < sum * 1e-17) break;
        }
        log_lower = s * std::log(x) - x - std::log(s) + std::log(sum);
        log_upper = log_diff(lg, log_lower);
    } else {
        constexpr double tiny = 1e-300;
        double b = x + 1.0 - s;
        double c = 1.0 / tiny;
        double d = 1.0 / (std::fabs(b) < tiny ? tiny : b);
        double h = d;
        for (int i = 1; i <= 100000; ++i) {
            const double an = -static_cast<double>(i) * (i - s);
            b += 2.0;
            d = an * d + b;
            if (std::fabs(d) < tiny) d = tiny;
            c = b + an / c;
            if (std::fabs(c) < tiny) c = tiny;
            d = 1.0 / d;
            const double del = d * c;
            h *= del;
            if (std::fabs(del - 1.0) < 1e-16) break;
        }
        log_upper = s * std::log(x) - x + std::log(h);
        log_lower = log_diff(lg, log_upper);
    }
    return LogValue::from_log(tail == GammaTail::lower ? log_lower : log_upper);
}

enum class EndpointSide { left, right };

// Endpoint Laplace approximation of int e^{-n f(t)} dt when the minimum of f
// sits at the integration boundary: e^{-n f(a_n)} / (n f'(a)) from the left,
// -e^{-n f(b_n)} / (n f'(b)) from the right. The slope at the endpoint must
// be nonzero with the sign that makes the integral decay into the interior.
template <class F, class DF>
LogValue laplace_endpoint(F&& f, DF&& df, double endpoint, double endpoint_n, int n,
                          EndpointSide side) {
    if (n < 1) throw std::domain_error("laplace_endpoint: requires n >= 1");
    const double slope = df(endpoint);
    if (side == EndpointSide::left && !(slope > 0.0)) {
        throw std::domain_error("laplace_endpoint: left endpoint needs f'(a) > 0");
    }
    if (side == EndpointSide::right && !(slope < 0.0)) {
        throw std::domain_error("laplace_endpoint: right endpoint needs f'(b) < 0");
    }
    const double nn = static_cast<double>(n);
    return LogValue::from_log(-nn * f(endpoint_n) - std::log(nn * std::fabs(slope)));
}

// Asymptotic form of Gamma_u(n+1, c_n n) for c > 1, and of Gamma_l(n+1, c_n n)
// for c < 1: n^n c e^{n(ln c_n - c_n)} / |c - 1|. Reduces to the endpoint
// Laplace approximation of n^{n+1} int e^{-n(y - ln y)} dy.
inline LogValue gamma_tail_asymptotic(double c_n, double c, int n) {
    if (!(c_n > 0.0) || !(c > 0.0)) throw std::domain_error("gamma_tail_asymptotic: requires c_n, c > 0");
    if (c == 1.0) throw std::domain_error("gamma_tail_asymptotic: c = 1 has no endpoint decay");
    auto f = [](double y) { return y - std::log(y); };
    auto df = [](double y) { return 1.0 - 1.0 / y; };
    const EndpointSide side = c > 1.0 ? EndpointSide::left : EndpointSide::right;
    const LogValue edge = laplace_endpoint(f, df, c, c_n, n, side);
    return LogValue::from_log(edge.log() + (n + 1.0) * std::log(static_cast<double>(n)));
}

} // namespace zerocell
