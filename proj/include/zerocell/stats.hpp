#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace zerocell {

// Monte Carlo estimate with a two-sided Wilson score interval.
struct EstimateCI {
    double p_hat = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    std::uint64_t n_samples = 0;
    std::uint64_t n_rejected = 0;
};

// Standard normal quantile (Acklam's rational approximation, |rel err| < 1.2e-9).
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: requires p in (0,1)");
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

inline EstimateCI wilson_interval(std::uint64_t successes, std::uint64_t trials, double level) {
    if (trials == 0) throw std::invalid_argument("wilson_interval: requires trials >= 1");
    if (!(level > 0.0 && level < 1.0)) throw std::domain_error("wilson_interval: level in (0,1)");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z = normal_quantile(0.5 * (1.0 + level));
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    EstimateCI ci;
    ci.p_hat = p;
    ci.lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
    ci.hi = successes == trials ? 1.0 : std::min(1.0, center + half);
    ci.n_samples = trials;
    return ci;
}

// One-sample Kolmogorov-Smirnov statistic against a CDF.
inline double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double dmax = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double F = cdf(samples[i]);
        dmax = std::max(dmax, std::max(F - static_cast<double>(i) / n,
                                       static_cast<double>(i + 1) / n - F));
    }
    return dmax;
}

// Critical value of the one-sample KS statistic at significance alpha
// (asymptotic inverse of the Kolmogorov tail with Stephens' small-sample
// denominator).
inline double ks_critical_value(std::size_t n, double alpha) {
    if (n == 0) throw std::invalid_argument("ks_critical_value: requires n >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("ks_critical_value: alpha in (0,1)");
    const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    const double rn = std::sqrt(static_cast<double>(n));
    return c / (rn + 0.12 + 0.11 / rn);
}

// Two-sample KS statistic.
inline double two_sample_ks(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("two_sample_ks: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double dmax = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        dmax = std::max(dmax, std::fabs(i / na - j / nb));
    }
    return dmax;
}

inline double two_sample_ks_critical_value(std::size_t n, std::size_t m, double alpha) {
    const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    return c * std::sqrt((static_cast<double>(n) + m) / (static_cast<double>(n) * m));
}

} // namespace zerocell
