#pragma once

#include <cmath>
#include <stdexcept>

#include "zerocell/log_space.hpp"
#include "zerocell/special_functions.hpp"

namespace zerocell {

// Hyperplane intensity from the cell intensity of the induced mosaic:
// gamma = (n kappa_n / kappa_{n-1}) (lambda / kappa_n)^{1/n}, in log space.
inline double hyperplane_intensity_from_log_cell(int dim, double log_lambda) {
    if (dim < 2) throw std::domain_error("hyperplane_intensity_from_log_cell: requires dim >= 2");
    const double lk_n = log_unit_ball_volume(dim).log();
    const double lk_n1 = log_unit_ball_volume(dim - 1).log();
    return std::exp(std::log(static_cast<double>(dim)) + lk_n - lk_n1 +
                    (log_lambda - lk_n) / dim);
}

// Inverse map: ln lambda = ln kappa_n + n ln(gamma kappa_{n-1} / (n kappa_n)).
inline double log_cell_intensity_from_hyperplane(int dim, double gamma) {
    if (dim < 2) throw std::domain_error("log_cell_intensity_from_hyperplane: requires dim >= 2");
    if (!(gamma > 0.0)) throw std::domain_error("log_cell_intensity_from_hyperplane: gamma > 0");
    const double lk_n = log_unit_ball_volume(dim).log();
    const double lk_n1 = log_unit_ball_volume(dim - 1).log();
    return lk_n + dim * (std::log(gamma) + lk_n1 - std::log(static_cast<double>(dim)) - lk_n);
}

// Stationary isotropic Poisson hyperplane mosaic, centered at the inball
// center of the zero cell. `alpha` is the scaling exponent for grids whose
// cell intensity is e^{n rho_n} n^{n alpha}; probabilities are then read at
// radius R n^{1/2 - alpha}.
struct HyperplaneModel {
    int dim = 0;
    double hyperplane_intensity = 0.0; // gamma
    double log_cell_intensity = 0.0;   // ln lambda
    double rho = 0.0;                  // (ln lambda) / dim
    double alpha = 0.0;

    static HyperplaneModel with_hyperplane_intensity(int dim, double gamma, double alpha = 0.0) {
        const double log_lambda = log_cell_intensity_from_hyperplane(dim, gamma);
        return {dim, gamma, log_lambda, log_lambda / dim, alpha};
    }

    static HyperplaneModel with_log_cell_intensity(int dim, double log_lambda, double alpha = 0.0) {
        const double gamma = hyperplane_intensity_from_log_cell(dim, log_lambda);
        return {dim, gamma, log_lambda, log_lambda / dim, alpha};
    }

    static HyperplaneModel with_cell_intensity(int dim, double lambda, double alpha = 0.0) {
        if (!(lambda > 0.0)) throw std::domain_error("HyperplaneModel: requires lambda > 0");
        return with_log_cell_intensity(dim, std::log(lambda), alpha);
    }

    // Cell intensity e^{n rho_n} n^{n alpha}.
    static HyperplaneModel with_rho(int dim, double rho_n, double alpha = 0.0) {
        if (dim < 2) throw std::domain_error("HyperplaneModel: requires dim >= 2");
        return with_log_cell_intensity(dim, dim * rho_n + dim * alpha * std::log(double(dim)),
                                       alpha);
    }
};

// Fraction of the unit sphere in the cap {v : <v, e> >= height}, height in [0, 1].
inline double cap_fraction(int dim, double height) {
    if (dim < 2) throw std::domain_error("cap_fraction: requires dim >= 2");
    if (!(height >= 0.0 && height <= 1.0)) throw std::domain_error("cap_fraction: height in [0,1]");
    return 0.5 * reg_inc_beta(1.0 - height * height, 0.5 * (dim - 1), 0.5);
}

// Mean measure of hyperplanes that hit the segment [0, x] and miss the open
// ball of the given hole radius. Zero whenever the segment stays inside the hole.
inline double mean_hit_measure(const HyperplaneModel& m, double distance, double hole_radius) {
    if (!(distance >= 0.0) || !(hole_radius >= 0.0)) {
        throw std::domain_error("mean_hit_measure: requires nonnegative arguments");
    }
    if (distance <= hole_radius || distance == 0.0) return 0.0;
    const double h = hole_radius / distance;
    const double c = 2.0 * std::exp(log_unit_ball_volume(m.dim - 1).log() -
                                    std::log(double(m.dim)) - log_unit_ball_volume(m.dim).log());
    const double shell = std::pow(1.0 - h * h, 0.5 * (m.dim - 1));
    const double cap = reg_inc_beta(1.0 - h * h, 0.5 * (m.dim - 1), 0.5);
    return m.hyperplane_intensity * distance * (c * shell - h * cap);
}

// Kernel f_n(t) of the tail integral: minimized at t = 0 where it equals
// 2 kappa_{n-1} / (n kappa_n); linear 2t branch past t = 1.
inline double tail_kernel(int dim, double t) {
    if (dim < 2) throw std::domain_error("tail_kernel: requires dim >= 2");
    if (!(t >= 0.0)) throw std::domain_error("tail_kernel: requires t >= 0");
    if (t >= 1.0) return 2.0 * t;
    const double c = 2.0 * std::exp(log_unit_ball_volume(dim - 1).log() - std::log(double(dim)) -
                                    log_unit_ball_volume(dim).log());
    return t + c * std::pow(1.0 - t * t, 0.5 * (dim - 1)) +
           t * reg_inc_beta(t * t, 0.5, 0.5 * (dim - 1));
}

inline double tail_kernel_derivative(int dim, double t) {
    if (dim < 2) throw std::domain_error("tail_kernel_derivative: requires dim >= 2");
    if (!(t >= 0.0)) throw std::domain_error("tail_kernel_derivative: requires t >= 0");
    if (t >= 1.0) return 2.0;
    return 1.0 + reg_inc_beta(t * t, 0.5, 0.5 * (dim - 1));
}

namespace detail {

// ln of the argument 2 gamma R kappa_{n-1} / (n kappa_n) = gamma R f_n(0).
inline double log_tail_argument(const HyperplaneModel& m, double radius) {
    return std::log(2.0) + std::log(m.hyperplane_intensity) + std::log(radius) +
           log_unit_ball_volume(m.dim - 1).log() - std::log(double(m.dim)) -
           log_unit_ball_volume(m.dim).log();
}

} // namespace detail

// Upper bound on P(|Y| >= R): Gamma_u(n+1, gamma R f_n(0)) / Gamma(n+1).
inline LogValue tail_upper(const HyperplaneModel& m, double radius) {
    if (!(radius >= 0.0)) throw std::domain_error("tail_upper: requires radius >= 0");
    const double arg = radius == 0.0 ? 0.0 : std::exp(detail::log_tail_argument(m, radius));
    const double s = m.dim + 1.0;
    return LogValue::from_log(inc_gamma(GammaTail::upper, s, arg).log() - log_gamma(s));
}

// Upper bound on P(|Y| <= R); can exceed one for small n, reported as is.
inline LogValue smallball_upper(const HyperplaneModel& m, double radius) {
    if (!(radius >= 0.0)) throw std::domain_error("smallball_upper: requires radius >= 0");
    const int n = m.dim;
    const double lk_n = log_unit_ball_volume(n).log();
    const double lk_n1 = log_unit_ball_volume(n - 1).log();
    const double log_ratio = lk_n1 - std::log(double(n)) - lk_n; // ln(kappa_{n-1}/(n kappa_n))
    const double log_prefix = std::log(double(n)) + 2.0 * lk_n - n * std::log(4.0) +
                              std::log(double(n)) + lk_n - std::log(2.0) - lk_n1;
    const double arg = radius == 0.0 ? 0.0 : std::exp(detail::log_tail_argument(m, radius));
    const double log_gl = inc_gamma(GammaTail::lower, n + 1.0, arg).log();
    const double log_const = log_gamma(double(n)) + (n + 1.0) * log_ratio;
    return LogValue::from_log(log_prefix + log_add(log_gl, log_const));
}

// ln of the moment bound E|Y|^k <= Gamma(n+k+1) / (Gamma(n+1) 2^k) (kappa_n/lambda)^{k/n}.
inline LogValue moment_bound(const HyperplaneModel& m, double k) {
    if (!(k >= 0.0)) throw std::domain_error("moment_bound: requires k >= 0");
    const int n = m.dim;
    return LogValue::from_log(log_gamma(n + k + 1.0) - log_gamma(n + 1.0) - k * std::log(2.0) +
                              (k / n) * (log_unit_ball_volume(n).log() - m.log_cell_intensity));
}

// Radius multiplier above which the scaled norm escapes: e^{-rho} sqrt(pi e / 2).
inline double upper_threshold_radius(double rho) {
    return std::exp(-rho) * std::sqrt(kPi * std::exp(1.0) / 2.0);
}

// Rate summary for the scaled norm of the hyperplane zero cell. upper_rate
// bounds (1/n) ln P(|Y_n| >= sqrt(n) R) for R above the upper threshold;
// smallball_rate bounds (1/n) ln P(|Y_n| <= sqrt(n) R) for R below it.
// R_lower is the root of rho + ln sqrt(2 pi e) + ln R - c(R) - ln 2.
struct RateReport {
    double c = 0.0;
    double upper_rate = 0.0;
    double smallball_rate = 0.0;
    double R_lower = 0.0;
    double R_upper = 0.0;
};

inline RateReport rate_report(double rho, double R) {
    if (!(R > 0.0)) throw std::domain_error("rate_report: requires R > 0");
    const double e1 = std::exp(1.0);
    auto c_of = [&](double r) { return std::exp(rho) * r * std::sqrt(2.0 / (kPi * e1)); };

    RateReport out;
    out.c = c_of(R);
    out.upper_rate = rho + 0.5 * std::log(2.0 * e1 / kPi) + std::log(R) - out.c;
    out.smallball_rate = rho + 0.5 * std::log(kPi * e1 / 2.0) + std::log(R) - out.c;
    out.R_upper = upper_threshold_radius(rho);

    // Root of g on (lo, hi); g < 0 at lo, g > 0 at hi, g strictly increasing there.
    auto g = [&](double r) {
        return rho + 0.5 * std::log(2.0 * kPi * e1) + std::log(r) - c_of(r) - std::log(2.0);
    };
    double lo = std::exp(-rho) / std::sqrt(2.0 * kPi * e1);
    double hi = out.R_upper;
    if (!(g(lo) < 0.0 && g(hi) > 0.0)) {
        throw std::runtime_error("rate_report: root bracket failed");
    }
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    double root = 0.5 * (lo + hi);
    for (int i = 0; i < 4; ++i) { // Newton polish
        const double slope = 1.0 / root - std::exp(rho) * std::sqrt(2.0 / (kPi * e1));
        root -= g(root) / slope;
    }
    out.R_lower = root;
    if (!(out.R_lower > std::exp(-rho) / std::sqrt(2.0 * kPi * e1)) ||
        !(out.R_lower < out.R_upper)) {
        throw std::runtime_error("rate_report: root left its bracket");
    }
    return out;
}

} // namespace zerocell
